#pragma once
// Umbrella header: the whole library.

#include "plap/calculus.hpp"
#include "plap/errors.hpp"
#include "plap/estimates.hpp"
#include "plap/experiments.hpp"
#include "plap/exponents.hpp"
#include "plap/geometry.hpp"
#include "plap/identities.hpp"
#include "plap/jet.hpp"
#include "plap/jets_operators.hpp"
#include "plap/ode.hpp"
#include "plap/quadrature.hpp"
#include "plap/reaction.hpp"
#include "plap/reports.hpp"
#include "plap/rng.hpp"
#include "plap/run_report.hpp"
#include "plap/scalar_field.hpp"
#include "plap/shooting.hpp"
#include "plap/solution_checks.hpp"
#include "plap/vector_fields.hpp"
