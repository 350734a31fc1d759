#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

namespace fpp {

using Rational = mpq_class;

// Right-continuous step function on [0,1]: value values[i] on
// [breaks[i], breaks[i+1]), with breaks[0] = 0 and breaks.back() = 1;
// the value at 1 is the last piece's value.
struct StepFn {
    std::vector<Rational> breaks;
    std::vector<Rational> values;

    static StepFn constant(const Rational& v);
    static StepFn indicator_at_least(const Rational& threshold);  // 1{x >= threshold}

    Rational at(const Rational& x) const;
    bool non_decreasing() const;
    bool non_negative() const;
    void validate(const char* name) const;
};

// Inputs of the averaged-variables quadrature inequalities: h, f
// non-negative non-decreasing, f constant on [a,1], window tau.
struct StepFunctionPair {
    StepFn h;
    StepFn f;
    Rational a;
    Rational tau;
};

enum class QuadratureCase {
    TailWindow,  // bound  int h f^2 1{x >= 1-tau}        (a > 1/2)
    SmallA,      // bound 2a  int h f^2                   (a < tau <= 1/2)
    SmallTau,    // bound 2tau int h f^2                  (tau <= a <= 1/2)
};

const char* quadrature_case_name(QuadratureCase c);

struct QuadratureResult {
    Rational lhs;  // int_tau^1 h(x) (f(x) - f(x-tau))^2 dx, exact
    Rational bound;
    QuadratureCase which;
};

// Exact rational integration. Preconditions (monotonicity, constancy on
// [a,1], tau <= 1/2) are verified and violations throw std::invalid_argument.
// A tie a == tau selects the SmallTau branch.
QuadratureResult uniformvar_quadrature(const StepFunctionPair& pair);

std::string rational_str(const Rational& q);

}  // namespace fpp
