#pragma once

#include "trilobatto/assembly.hpp"
#include "trilobatto/bounds.hpp"
#include "trilobatto/construct.hpp"
#include "trilobatto/error.hpp"
#include "trilobatto/functionals.hpp"
#include "trilobatto/interior.hpp"
#include "trilobatto/io.hpp"
#include "trilobatto/moments.hpp"
#include "trilobatto/polynomial.hpp"
#include "trilobatto/rule.hpp"
#include "trilobatto/tolerances.hpp"
#include "trilobatto/univariate.hpp"
#include "trilobatto/verify.hpp"
