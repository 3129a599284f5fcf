#pragma once

#include "errors.hpp"
#include "graded.hpp"
#include "linalg.hpp"
#include "derivation.hpp"
#include "model.hpp"
#include "bundle.hpp"
#include "cohomology.hpp"
#include "tduality.hpp"
#include "symmetries.hpp"
#include "brackets.hpp"
#include "random.hpp"
#include "identities.hpp"
#include "parser.hpp"
