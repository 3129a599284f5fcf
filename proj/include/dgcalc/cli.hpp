#pragma once

// Command surface of the dgcalc tool. Exit codes: 0 when every requested check
// passes, 1 when a check fails, 2 for usage, parse or shape errors.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "identities.hpp"
#include "parser.hpp"

namespace dgcalc {

enum class ReportFormat { Text, Kv };

/// Collects human-readable lines and key=value records side by side.
class Report {
 public:
  Report(std::string command, ReportFormat fmt) : command_(std::move(command)), fmt_(fmt) {}

  void row(const std::string& text, std::vector<std::pair<std::string, std::string>> kv) {
    if (fmt_ == ReportFormat::Text) {
      if (!text.empty()) out_ << text << '\n';
      return;
    }
    out_ << "command=" << command_;
    for (const auto& [k, v] : kv) out_ << ' ' << k << '=' << escape(v);
    out_ << '\n';
  }
  void text(const std::string& t) {
    if (fmt_ == ReportFormat::Text) out_ << t;
  }
  void status(bool pass) {
    ok_ = ok_ && pass;
  }
  bool ok() const { return ok_; }
  std::string str() const { return out_.str(); }

 private:
  static std::string escape(const std::string& v) {
    if (v.find_first_of(" \t\"") == std::string::npos && !v.empty()) return v;
    std::string s = "\"";
    for (char c : v) {
      if (c == '"' || c == '\\') s += '\\';
      s += c;
    }
    return s + '"';
  }

  std::string command_;
  ReportFormat fmt_;
  std::ostringstream out_;
  bool ok_ = true;
};

namespace detail {

inline std::string pf(bool b) { return b ? "pass" : "fail"; }
inline std::string num(std::size_t v) { return std::to_string(v); }
inline std::string num(int v) { return std::to_string(v); }

class FileError : public Error {
 public:
  using Error::Error;
};

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Options {
  std::string file;
  int lo = 0;
  int hi = -1;
  int cap = -1;
  std::uint64_t seed = 0;
  std::size_t trials = 100;
  std::string a, b;
  std::string format = "text";
};

inline void report_laws(Report& rep, const std::vector<LawResult>& laws, const std::string& shape) {
  for (const auto& l : laws) {
    rep.row(l.name + ": " + pf(l.pass()) + " (" + num(l.trials) + " checks" +
                (l.pass() ? std::string(")") : ", " + num(l.failures) + " failed; first: " + l.witness + ")"),
            {{"shape", shape}, {"law", l.name}, {"checks", num(l.trials)}, {"failures", num(l.failures)},
             {"status", pf(l.pass())}});
    rep.status(l.pass());
  }
}

inline std::string shape_name(const DgBundle& b) {
  if (b.shape() == Shape::Rn) return "rn" + std::to_string(b.n());
  if (b.shape() == Shape::TwoStage) return b.n() == 3 && b.has_form("F4") ? "e6" : "r21";
  return to_string(b.shape());
}

inline int cmd_validate(const ModelFile& mf, Report& rep) {
  const DgBundle& b = mf.bundle();
  rep.row("model " + mf.name, {{"model", mf.name}});
  rep.row("generators " + num(mf.gens.size()) + ", formal dimension " + num(mf.dim),
          {{"generators", num(mf.gens.size())}, {"dim", num(mf.dim)}});
  rep.row("shape " + shape_name(b), {{"shape", shape_name(b)}});
  rep.row("d^2 = 0: pass", {{"check", "d2"}, {"status", "pass"}});
  if (mf.has_bundle()) rep.row("Q^2 = 0: pass", {{"check", "mc"}, {"status", "pass"}});
  return 0;
}

inline int cmd_betti(const ModelFile& mf, const Options& o, Report& rep) {
  const int hi = o.hi < 0 ? degree_cap_override().value_or(2 * mf.dim + 2) : o.hi;
  BettiTable t = betti(mf.bundle(), o.lo, hi);
  for (int k = o.lo; k <= hi; ++k)
    rep.row("H^" + num(k) + " = " + num(t[k]), {{"degree", num(k)}, {"betti", num(t[k])}});
  return 0;
}

inline int cmd_twisted(const ModelFile& mf, const Options& o, Report& rep) {
  const DgBundle& b = mf.bundle();
  std::optional<int> cap;
  if (o.cap > 0) cap = o.cap;
  TwistedBetti tb;
  std::string on;
  if (b.shape() == Shape::Rn) {
    tb = twisted_betti(b.base(), b.form("Theta"), cap);
    on = "base, Theta";
  } else if (b.shape() == Shape::TwoStage && b.n() == 1) {
    Model e = first_stage(b);
    const Element eta = transport(b.form("H"), e.algebra()) +
                        Element::generator(e.algebra(), b.fiber(0)) * transport(b.form("Fbar"), e.algebra());
    tb = twisted_betti(e, eta, cap);
    on = "first stage, H + q Fbar";
  } else if (const Element* h = mf.element("H")) {
    tb = twisted_betti(b.base(), *h, cap);
    on = "base, elem H";
  } else {
    throw ShapeMismatch("twisted needs an rn bundle, an r21 bundle, or 'elem H = ...'");
  }
  rep.row("twisted cohomology (" + on + "): even " + num(tb.ev) + ", odd " + num(tb.od) +
              (tb.finite ? " (full complex)" : " (cap " + num(tb.cap) + ")"),
          {{"even", num(tb.ev)}, {"odd", num(tb.od)}, {"cap", num(tb.cap)}, {"finite", tb.finite ? "1" : "0"}});
  return 0;
}

inline int cmd_mc(const ModelFile& mf, Report& rep) {
  if (!mf.field()) {
    rep.row("no bundle; d^2 = 0: pass", {{"check", "mc"}, {"status", "pass"}});
    return 0;
  }
  const McResult& mc = mf.mc();
  if (mc) rep.row("Q^2 = 0: pass", {{"check", "mc"}, {"status", "pass"}});
  else
    rep.row("Q^2 = 0: fail on " + mc.generator + ": " + to_string(*mc.residue),
            {{"check", "mc"}, {"status", "fail"}, {"generator", mc.generator}, {"residue", to_string(*mc.residue)}});
  const Model& base = mf.base();
  auto eq = [&](const std::string& name, const Element& r) {
    rep.row(name + ": " + (r.is_zero() ? std::string("0") : to_string(r)),
            {{"equation", name}, {"residue", to_string(r)}, {"status", pf(r.is_zero())}});
  };
  auto form = [&](const std::string& f) {
    for (const auto& [k, v] : mf.forms)
      if (k == f) return v;
    return base.zero();
  };
  if (mf.kind == BundleKind::Rn) {
    eq("d Theta", base.d(form("Theta")));
  } else if (mf.kind == BundleKind::R21) {
    eq("d F", base.d(form("F")));
    eq("d Fbar", base.d(form("Fbar")));
    eq("d H + F Fbar", base.d(form("H")) + form("F") * form("Fbar"));
  } else if (mf.kind == BundleKind::E6) {
    eq("d F4", base.d(form("F4")));
    eq("d F7 + F4 F4/2", base.d(form("F7")) + Rational(1, 2) * form("F4") * form("F4"));
  }
  return mc ? 0 : 1;
}

inline const DgBundle& require_pair_shape(const ModelFile& mf, const char* what) {
  mf.bundle().require(Shape::TwoStage, 1, what);
  return mf.bundle();
}

inline int cmd_tdualize(const ModelFile& mf, Report& rep) {
  TDualPair pair = dualize(require_pair_shape(mf, "tdualize"));
  rep.text(print_bundle(mf.name + "_dual", pair.Pbar));
  rep.row("", {{"F", to_string(pair.Pbar.form("F"))},
               {"Fbar", to_string(pair.Pbar.form("Fbar"))},
               {"H", to_string(pair.Pbar.form("H"))},
               {"fibers", pair.Pbar.fiber(0) + "," + pair.Pbar.fiber(1)}});
  return 0;
}

inline int cmd_tmap(const ModelFile& mf, const Options& o, Report& rep) {
  const TDualPair pair = dualize(require_pair_shape(mf, "tmap-verify"));
  const int hi = o.hi < 0 ? degree_cap_override().value_or(2 * mf.dim + 2) : o.hi;
  ChainMapCheck c = verify_chain_map(t_chain_map(pair), o.lo, hi);
  const bool sign_ok = c.sign == 0 || c.sign == kTDualitySign;
  const std::string sgn = c.sign == 0 ? "0" : (c.sign > 0 ? "+1" : "-1");
  rep.row("T Q = eps Qbar T on degrees " + num(o.lo) + ".." + num(hi) + ": " + pf(c.pass && sign_ok) +
              " (eps = " + sgn + ", frozen +1)" + (c.pass ? "" : "; witness " + c.witness),
          {{"check", "chain-map"}, {"lo", num(o.lo)}, {"hi", num(hi)}, {"sign", sgn},
           {"status", pf(c.pass && sign_ok)}});
  rep.status(c.pass && sign_ok);
  return rep.ok() ? 0 : 1;
}

inline int cmd_ses(const ModelFile& mf, const Options& o, Report& rep) {
  const TDualPair pair = dualize(require_pair_shape(mf, "ses-verify"));
  const int cap = o.cap < 0 ? 2 * mf.dim + 2 : o.cap;
  SesReport s = ses_verify(pair, cap);
  rep.text("k  C^k(P)  base  ker T  rank T  C^{k-1}(Pbar)  status\n");
  for (const auto& r : s.rows) {
    std::ostringstream line;
    line << r.degree << "  " << r.dim_c << "  " << r.dim_base << "  " << r.dim_ker << "  " << r.dim_im << "  "
         << r.dim_target << "  " << pf(r.pass());
    rep.row(line.str(), {{"degree", num(r.degree)}, {"dim_c", num(r.dim_c)}, {"dim_base", num(r.dim_base)},
                         {"dim_ker", num(r.dim_ker)}, {"rank", num(r.dim_im)}, {"dim_target", num(r.dim_target)},
                         {"status", pf(r.pass())}});
  }
  const std::string sgn = s.chain.sign == 0 ? "0" : (s.chain.sign > 0 ? "+1" : "-1");
  rep.row("chain map: " + pf(s.chain.pass) + " (eps = " + sgn + ")",
          {{"check", "chain-map"}, {"sign", sgn}, {"status", pf(s.chain.pass)}});
  rep.status(s.pass());
  return rep.ok() ? 0 : 1;
}

inline int cmd_iso(const ModelFile& mf, const Options& o, Report& rep) {
  const TDualPair pair = dualize(require_pair_shape(mf, "iso-check"));
  const int hi = o.hi < 0 ? mf.dim + 4 : o.hi;
  for (int k = mf.dim; k <= hi; ++k) {
    IsoCheck c = tduality_iso_check(pair, k);
    rep.row("H^" + num(k + 1) + "(P) = " + num(c.h_p) + ", H^" + num(k) + "(Pbar) = " + num(c.h_dual) +
                ", rank T = " + num(c.rank) + ": " + pf(c.pass),
            {{"check", "iso"}, {"k", num(k)}, {"h_p", num(c.h_p)}, {"h_dual", num(c.h_dual)},
             {"rank", num(c.rank)}, {"status", pf(c.pass)}});
    rep.status(c.pass);
  }
  LesReport les = les_verify(pair, hi);
  for (const auto& r : les.rows) {
    rep.row("LES k=" + num(r.k) + ": H(M) " + num(r.h_base) + ", H(P) " + num(r.h_p) + ", H(Pbar) " +
                num(r.h_dual) + ", ranks i/T/beta " + num(r.rank_i) + "/" + num(r.rank_t) + "/" +
                num(r.rank_beta) + ": " + pf(r.exact),
            {{"check", "les"}, {"k", num(r.k)}, {"h_base", num(r.h_base)}, {"h_p", num(r.h_p)},
             {"h_dual", num(r.h_dual)}, {"rank_i", num(r.rank_i)}, {"rank_t", num(r.rank_t)},
             {"rank_beta", num(r.rank_beta)}, {"status", pf(r.exact)}});
  }
  rep.row("LES alternating sums: " + pf(les.alternating_ok),
          {{"check", "les-alternating"}, {"status", pf(les.alternating_ok)}});
  rep.status(les.pass());
  return rep.ok() ? 0 : 1;
}

inline SymElement named_sym(const ModelFile& mf, const std::string& name) {
  if (!mf.sym_spec(name)) throw Error("no symmetry named '" + name + "' in the model file");
  return mf.sym(name);
}

inline void sym_row(Report& rep, const std::string& label, const SymElement& s) {
  rep.row(label + " = " + to_string(s),
          {{"element", label}, {"degree", num(s.degree())}, {"vec", to_string(s.vec())}, {"q", to_string(s.q())},
           {"t", to_string(s.t())}, {"tq", to_string(s.tq())}});
}

inline int cmd_sym(const ModelFile& mf, const Options& o, Report& rep) {
  const DgBundle& b = mf.bundle();
  if (b.shape() != Shape::Rn && b.shape() != Shape::TwoStage)
    throw ShapeMismatch("sym needs an rn, r21 or e6 bundle");
  if (!o.a.empty() && !o.b.empty()) {
    sym_row(rep, "[" + o.a + ", " + o.b + "]", sym_bracket(named_sym(mf, o.a), named_sym(mf, o.b)));
    return 0;
  }
  if (!o.a.empty()) {
    SymElement a = named_sym(mf, o.a);
    if (a.degree() < 0) {
      sym_row(rep, "[Q, " + o.a + "]", sym_differential(a));
      return 0;
    }
    const bool m = is_symmetry(a);
    const Sym0Residual r = sym0_residual(a);
    rep.row(o.a + " in sym^0: " + std::string(m ? "yes" : "no") + " (residuals " + to_string(r.q) + " ; " +
                to_string(r.t) + " ; " + to_string(r.tq) + ")",
            {{"element", o.a}, {"member", m ? "1" : "0"}, {"res_q", to_string(r.q)}, {"res_t", to_string(r.t)},
             {"res_tq", to_string(r.tq)}});
    return 0;
  }
  Sym0Dimensions d = sym0_dimensions(b);
  rep.row("Vect^0: " + num(d.vect0) + ", sym^0 (full kernel): " + num(d.full) + ", ansatz span: " + num(d.ansatz) +
              ", ansatz in sym^0: " + num(d.ansatz_kernel),
          {{"vect0", num(d.vect0)}, {"sym0_full", num(d.full)}, {"ansatz", num(d.ansatz)},
           {"ansatz_sym0", num(d.ansatz_kernel)}, {"discrepancy", num(d.full - d.ansatz_kernel)}});
  for (const auto& s : mf.syms) {
    SymElement a = mf.sym(s.name);
    if (a.degree() == 0) rep.row(s.name + " in sym^0: " + std::string(is_symmetry(a) ? "yes" : "no"),
                                 {{"element", s.name}, {"member", is_symmetry(a) ? "1" : "0"}});
    else sym_row(rep, "[Q, " + s.name + "]", sym_differential(a));
  }
  return 0;
}

inline int cmd_derived(const ModelFile& mf, const Options& o, Report& rep) {
  if (o.a.empty() || o.b.empty()) throw CLI::ValidationError("derived-bracket needs --a and --b");
  sym_row(rep, "<" + o.a + ", " + o.b + ">", derived_bracket(named_sym(mf, o.a), named_sym(mf, o.b)));
  return 0;
}

inline int cmd_bn(const ModelFile& mf, const Options& o, Report& rep) {
  Rng rng(o.seed);
  const DgBundle& b = mf.bundle();
  if (!self_dual(b)) throw ShapeMismatch("bn-check needs an r21 bundle with F = Fbar");
  report_laws(rep, {check_bn(b, mf.frame(), rng, o.trials)}, "r21");
  return rep.ok() ? 0 : 1;
}

inline int cmd_e6(const ModelFile& mf, const Options& o, Report& rep) {
  Rng rng(o.seed);
  const DgBundle& b = mf.bundle();
  if (mf.kind != BundleKind::E6) throw ShapeMismatch("e6-check needs an e6 bundle");
  report_laws(rep, {check_e6(b, mf.frame(), rng, o.trials)}, "e6");
  return rep.ok() ? 0 : 1;
}

inline int cmd_identities(const ModelFile& mf, const Options& o, Report& rep) {
  Rng rng(o.seed);
  const DgBundle& b = mf.bundle();
  if (b.shape() != Shape::Rn && b.shape() != Shape::TwoStage)
    throw ShapeMismatch("identities need an rn, r21 or e6 bundle");
  const std::string shape = shape_name(b);
  std::vector<LawResult> laws = dgla_laws(b, rng, o.trials);
  const Frame fr = mf.frame();
  if (b.shape() == Shape::Rn) {
    laws.push_back(check_rn_tables(b, fr, rng, o.trials));
  } else {
    laws.push_back(check_r21_tables(b, fr, rng, o.trials));
    if (b.n() == 1) {
      const TDualPair pair = dualize(b);
      laws.push_back(check_phi(pair, fr));
      laws.push_back(check_courant(pair, fr, rng, o.trials));
    }
    if (self_dual(b)) laws.push_back(check_bn(b, fr, rng, o.trials));
    if (mf.kind == BundleKind::E6) laws.push_back(check_e6(b, fr, rng, o.trials));
  }
  laws.push_back(check_sym0_membership(b, fr, rng, o.trials));
  report_laws(rep, laws, shape);
  return rep.ok() ? 0 : 1;
}

}  // namespace detail

/// Runs one command; `args` excludes the program name.
inline int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact computations with dg-bundles, T-duality and symmetry brackets", "dgcalc"};
  app.require_subcommand(1);
  detail::Options o;
  struct Cmd {
    const char* name;
    const char* help;
  };
  const std::vector<Cmd> cmds = {
      {"validate", "parse and validate a model file"},
      {"betti", "Betti numbers of the model or bundle"},
      {"twisted", "twisted cohomology dimensions"},
      {"mc-check", "Maurer-Cartan check with structural equations"},
      {"tdualize", "print the T-dual bundle"},
      {"tmap-verify", "check that T is a chain map"},
      {"ses-verify", "check the short exact sequence degree by degree"},
      {"iso-check", "T-duality isomorphism and long exact sequence"},
      {"sym", "sym^0 dimensions, brackets and differentials of named elements"},
      {"derived-bracket", "derived bracket of two named elements"},
      {"bn-check", "B_n bracket, pairing and fixed points"},
      {"e6-check", "E6 bracket, pairing and actions"},
      {"identities", "randomized dgla and Leibniz identity suite"},
  };
  for (const auto& c : cmds) {
    CLI::App* s = app.add_subcommand(c.name, c.help);
    s->add_option("file", o.file, "model file (.dgm)")->required();
    s->add_option("--format", o.format, "text or kv")->check(CLI::IsMember({"text", "kv"}));
    const std::string n = c.name;
    if (n == "betti" || n == "tmap-verify") {
      s->add_option("--lo", o.lo, "lowest degree")->check(CLI::NonNegativeNumber);
      s->add_option("--hi", o.hi, "highest degree")->check(CLI::NonNegativeNumber);
    }
    if (n == "iso-check") s->add_option("--hi", o.hi, "highest k")->check(CLI::NonNegativeNumber);
    if (n == "twisted" || n == "ses-verify") s->add_option("--cap", o.cap, "degree cap")->check(CLI::PositiveNumber);
    if (n == "sym" || n == "derived-bracket") {
      s->add_option("--a", o.a, "first named element");
      s->add_option("--b", o.b, "second named element");
    }
    if (n == "bn-check" || n == "e6-check" || n == "identities") {
      s->add_option("--seed", o.seed, "random seed");
      s->add_option("--trials", o.trials, "trials per law")->check(CLI::PositiveNumber);
    }
  }
  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }
  const std::string cmd = app.get_subcommands().front()->get_name();
  try {
    ParseOptions popts;
    popts.require_mc = cmd != "mc-check";
    const ModelFile mf = parse_model(detail::read_file(o.file), popts);
    Report rep(cmd, o.format == "kv" ? ReportFormat::Kv : ReportFormat::Text);
    int code = 0;
    if (cmd == "validate") code = detail::cmd_validate(mf, rep);
    else if (cmd == "betti") code = detail::cmd_betti(mf, o, rep);
    else if (cmd == "twisted") code = detail::cmd_twisted(mf, o, rep);
    else if (cmd == "mc-check") code = detail::cmd_mc(mf, rep);
    else if (cmd == "tdualize") code = detail::cmd_tdualize(mf, rep);
    else if (cmd == "tmap-verify") code = detail::cmd_tmap(mf, o, rep);
    else if (cmd == "ses-verify") code = detail::cmd_ses(mf, o, rep);
    else if (cmd == "iso-check") code = detail::cmd_iso(mf, o, rep);
    else if (cmd == "sym") code = detail::cmd_sym(mf, o, rep);
    else if (cmd == "derived-bracket") code = detail::cmd_derived(mf, o, rep);
    else if (cmd == "bn-check") code = detail::cmd_bn(mf, o, rep);
    else if (cmd == "e6-check") code = detail::cmd_e6(mf, o, rep);
    else code = detail::cmd_identities(mf, o, rep);
    out << rep.str();
    return code;
  } catch (const ParseError& e) {
    err << o.file << ": " << e.what() << '\n';
    return 2;
  } catch (const ShapeMismatch& e) {
    err << "shape mismatch: " << e.what() << '\n';
    return 2;
  } catch (const CLI::ValidationError& e) {
    err << e.what() << '\n';
    return 2;
  } catch (const detail::FileError& e) {
    err << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace dgcalc
