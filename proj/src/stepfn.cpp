#include "stepfn.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace fpp {

StepFn StepFn::constant(const Rational& v) {
    StepFn s;
    s.breaks = {Rational(0), Rational(1)};
    s.values = {v};
    return s;
}

StepFn StepFn::indicator_at_least(const Rational& threshold) {
    if (threshold <= 0 || threshold >= 1) return constant(threshold <= 0 ? 1 : 0);
    StepFn s;
    s.breaks = {Rational(0), threshold, Rational(1)};
    s.values = {Rational(0), Rational(1)};
    return s;
}

Rational StepFn::at(const Rational& x) const {
    if (x >= breaks.back()) return values.back();
    size_t i = 0;
    while (i + 1 < breaks.size() && breaks[i + 1] <= x) ++i;
    return values[i];
}

bool StepFn::non_decreasing() const {
    for (size_t i = 1; i < values.size(); ++i)
        if (values[i] < values[i - 1]) return false;
    return true;
}

bool StepFn::non_negative() const {
    for (const auto& v : values)
        if (v < 0) return false;
    return true;
}

void StepFn::validate(const char* name) const {
    std::string n(name);
    if (breaks.size() < 2 || values.size() + 1 != breaks.size())
        throw std::invalid_argument(n + ": malformed step function");
    if (breaks.front() != 0 || breaks.back() != 1)
        throw std::invalid_argument(n + ": domain must be [0,1]");
    for (size_t i = 1; i < breaks.size(); ++i)
        if (breaks[i] <= breaks[i - 1]) throw std::invalid_argument(n + ": breakpoints not increasing");
    if (!non_negative()) throw std::invalid_argument(n + ": negative value");
    if (!non_decreasing()) throw std::invalid_argument(n + ": not non-decreasing");
}

const char* quadrature_case_name(QuadratureCase c) {
    switch (c) {
        case QuadratureCase::TailWindow: return "tail_window";
        case QuadratureCase::SmallA: return "small_a";
        case QuadratureCase::SmallTau: return "small_tau";
    }
    return "?";
}

namespace {

// All integrands are piecewise constant between consecutive cut points.
std::vector<Rational> cut_points(const StepFunctionPair& p) {
    std::set<Rational> cuts{Rational(0), Rational(1), p.tau, Rational(1) - p.tau};
    for (const auto& b : p.h.breaks) cuts.insert(b);
    for (const auto& b : p.f.breaks) {
        cuts.insert(b);
        Rational shifted = b + p.tau;
        if (shifted < 1) cuts.insert(shifted);
    }
    std::vector<Rational> out;
    for (const auto& c : cuts)
        if (c >= 0 && c <= 1) out.push_back(c);
    return out;
}

}  // namespace

QuadratureResult uniformvar_quadrature(const StepFunctionPair& pair) {
    pair.h.validate("h");
    pair.f.validate("f");
    if (pair.a < 0 || pair.a > 1) throw std::invalid_argument("a outside [0,1]");
    if (pair.tau <= 0 || pair.tau > 1) throw std::invalid_argument("tau outside (0,1]");
    if (pair.tau > Rational(1, 2)) throw std::invalid_argument("quadrature cases need tau <= 1/2");

    // f must be constant on [a,1].
    const Rational fa = pair.f.at(pair.a);
    for (size_t i = 0; i < pair.f.values.size(); ++i) {
        if (pair.f.breaks[i + 1] > pair.a && pair.f.values[i] != fa)
            throw std::invalid_argument("f is not constant on [a,1]");
    }

    auto cuts = cut_points(pair);
    Rational lhs(0), full(0), tail(0);
    for (size_t i = 0; i + 1 < cuts.size(); ++i) {
        const Rational& lo = cuts[i];
        const Rational& hi = cuts[i + 1];
        Rational len = hi - lo;
        Rational mid = (lo + hi) / 2;
        Rational hv = pair.h.at(mid);
        Rational fv = pair.f.at(mid);
        full += hv * fv * fv * len;
        if (mid >= 1 - pair.tau) tail += hv * fv * fv * len;
        if (mid >= pair.tau) {
            Rational diff = fv - pair.f.at(mid - pair.tau);
            lhs += hv * diff * diff * len;
        }
    }

    QuadratureResult res;
    res.lhs = lhs;
    if (pair.a > Rational(1, 2)) {
        res.which = QuadratureCase::TailWindow;
        res.bound = tail;
    } else if (pair.tau <= pair.a) {
        res.which = QuadratureCase::SmallTau;
        res.bound = 2 * pair.tau * full;
    } else {
        res.which = QuadratureCase::SmallA;
        res.bound = 2 * pair.a * full;
    }
    return res;
}

std::string rational_str(const Rational& q) {
    return q.get_str();
}

}  // namespace fpp
