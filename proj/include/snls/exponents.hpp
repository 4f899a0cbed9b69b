#pragma once

// Exact exponent arithmetic: admissible space-time pairs, dual exponents,
// Hoelder gaps, and the power-of-nonlinearity ranges for each regularity
// class, all over exact rationals with open/closed endpoint bookkeeping.

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "snls/rational.hpp"

namespace snls {

struct StrichartzPair {
    Rational p;
    Rational q;
    int dimension = 1;

    std::string to_string() const {
        return "(" + p.to_string() + ", " + q.to_string() + ")";
    }
};

struct AdmissibilityCertificate {
    bool admissible = false;
    bool scaling_ok = false;  // 2/q == d/2 - d/p
    bool range_ok = false;    // d-dependent endpoint ranges
    std::string detail;
};

// 1/h^+ convention: the reciprocal is 1/h for h > 0 and infinity otherwise,
// so bounds of the form 1 + 4/(d-k)^+ become +infinity when d <= k.
inline Rational plus_part_reciprocal(const Rational& h) {
    if (h.sign() <= 0) return Rational::inf();
    return Rational(1) / h;
}

inline AdmissibilityCertificate check_admissible(int d, const Rational& p, const Rational& q) {
    if (d < 1) throw std::invalid_argument("admissible: dimension must be >= 1");
    if (p.sign() <= 0 || q.sign() <= 0)
        throw std::invalid_argument("admissible: exponents must be positive");
    AdmissibilityCertificate cert;

    // Scaling relation 2/q = d/2 - d/p, rearranged to avoid arithmetic with
    // infinite endpoints: 2*p + d*q = (d/2)*p*q, with 1/inf treated as 0.
    const Rational inv_p = p.is_inf() ? Rational(0) : Rational(1) / p;
    const Rational inv_q = q.is_inf() ? Rational(0) : Rational(1) / q;
    const Rational lhs = Rational(2) * inv_q;
    const Rational rhs = Rational(d, 2) - Rational(d) * inv_p;
    cert.scaling_ok = (lhs == rhs);

    const Rational two(2);
    bool range = p >= two && q >= two;
    if (d == 2) range = range && !p.is_inf() && q > two;
    cert.range_ok = range;

    cert.admissible = cert.scaling_ok && cert.range_ok;
    cert.detail = "2/q = " + lhs.to_string() + ", d/2 - d/p = " + rhs.to_string() +
                  (cert.range_ok ? ", range ok" : ", range violated") +
                  " for d = " + std::to_string(d);
    return cert;
}

inline bool is_admissible(int d, const Rational& p, const Rational& q) {
    return check_admissible(d, p, q).admissible;
}

// Conjugate exponent: 1/p + 1/p' = 1 exactly.
inline Rational dual_exponent(const Rational& p) {
    if (p.is_inf()) return Rational(1);
    if (p < Rational(1)) throw std::invalid_argument("dual_exponent: p must be >= 1");
    if (p == Rational(1)) return Rational::inf();
    return p / (p - Rational(1));
}

// Hoelder gap theta = 1 - 2/q, positive exactly when q > 2.
inline Rational theta_gap(const Rational& q) {
    if (q.is_inf()) return Rational(1);
    if (q <= Rational(2)) throw std::invalid_argument("theta_gap: requires q > 2");
    return Rational(1) - Rational(2) / q;
}

struct AlphaInterval {
    Rational lo;
    Rational hi;  // may be +infinity (then open)
    bool lo_closed = false;
    bool hi_closed = false;

    bool contains(const Rational& a) const {
        if (lo_closed ? a < lo : a <= lo) return false;
        if (hi.is_inf()) return true;
        return hi_closed ? a <= hi : a < hi;
    }
    bool empty() const {
        if (hi.is_inf()) return false;
        if (lo < hi) return false;
        return !(lo == hi && lo_closed && hi_closed);
    }
    std::string to_string() const {
        return std::string(lo_closed ? "[" : "(") + lo.to_string() + ", " + hi.to_string() +
               (hi_closed ? "]" : ")");
    }
};

struct AlphaRange {
    std::vector<AlphaInterval> intervals;  // disjoint, increasing

    bool contains(const Rational& a) const {
        for (const auto& iv : intervals)
            if (iv.contains(a)) return true;
        return false;
    }
    std::string to_string() const {
        std::string s;
        bool first = true;
        for (const auto& iv : intervals) {
            if (iv.empty()) continue;
            if (!first) s += " u ";
            s += iv.to_string();
            first = false;
        }
        return first ? "(empty)" : s;
    }
};

inline AlphaInterval open_iv(Rational lo, Rational hi) { return {std::move(lo), std::move(hi), false, false}; }
inline AlphaInterval clopen_iv(Rational lo, Rational hi) { return {std::move(lo), std::move(hi), true, false}; }

// Generic scaling heuristic for local well-posedness in H^s:
// 1 < alpha < 1 + 4/(d-2s)^+.
inline AlphaRange scaling_range(int d, const Rational& s) {
    if (d < 1) throw std::invalid_argument("scaling_range: dimension must be >= 1");
    if (s.sign() < 0) throw std::invalid_argument("scaling_range: s must be >= 0");
    const Rational bound =
        Rational(1) + Rational(4) * plus_part_reciprocal(Rational(d) - Rational(2) * s);
    return {{open_iv(Rational(1), bound)}};
}

enum class RangeScope { local_l2, local_h1, local_h2, h2_smooth, global_h1, global_h2 };

inline std::string to_string(RangeScope sc) {
    switch (sc) {
        case RangeScope::local_l2: return "local-L2";
        case RangeScope::local_h1: return "local-H1";
        case RangeScope::local_h2: return "local-H2";
        case RangeScope::h2_smooth: return "H2-smooth";
        case RangeScope::global_h1: return "global-H1";
        case RangeScope::global_h2: return "global-H2";
    }
    return "?";
}

inline std::optional<RangeScope> scope_from_string(const std::string& s) {
    if (s == "local-L2") return RangeScope::local_l2;
    if (s == "local-H1") return RangeScope::local_h1;
    if (s == "local-H2") return RangeScope::local_h2;
    if (s == "H2-smooth") return RangeScope::h2_smooth;
    if (s == "global-H1") return RangeScope::global_h1;
    if (s == "global-H2") return RangeScope::global_h2;
    return std::nullopt;
}

inline int scope_sobolev_index(RangeScope sc) {
    switch (sc) {
        case RangeScope::local_l2: return 0;
        case RangeScope::local_h1:
        case RangeScope::global_h1: return 1;
        default: return 2;
    }
}

// Admitted nonlinearity powers per regularity class and dimension. `lambda`
// (+1 focusing / -1 defocusing) matters for the global scopes only.
inline AlphaRange power_range(int d, int s, int lambda, RangeScope scope) {
    if (d < 1) throw std::invalid_argument("power_range: dimension must be >= 1");
    if (s != scope_sobolev_index(scope))
        throw std::invalid_argument("power_range: s does not match the scope (expected s = " +
                                    std::to_string(scope_sobolev_index(scope)) + ")");
    if (lambda != 1 && lambda != -1)
        throw std::invalid_argument("power_range: lambda must be +1 or -1");
    const Rational one(1), two(2), four(4);

    switch (scope) {
        case RangeScope::local_l2: {
            // conservative L2 theory
            if (d <= 2) return {{open_iv(one, one + four / Rational(d))}};
            return {{open_iv(one, one + two / Rational(d - 1))}};
        }
        case RangeScope::local_h1: {
            // conservative H1 theory
            if (d <= 2) return {{open_iv(one, Rational::inf())}};
            if (d == 3) return {{open_iv(one, Rational(5))}};
            if (d <= 5)
                return {{open_iv(one, one + two / Rational(d - 1)),
                         clopen_iv(two, one + four / Rational(d - 2))}};
            return {{open_iv(one, one + two / Rational(d - 1))}};
        }
        case RangeScope::local_h2: {
            if (d <= 4) return {{open_iv(one, Rational::inf())}};
            if (d <= 7)
                return {{open_iv(one, one + two / Rational(d - 2)),
                         clopen_iv(two, one + four / Rational(d - 4))}};
            return {{open_iv(one, one + two / Rational(d - 2))}};
        }
        case RangeScope::h2_smooth: {
            // smooth-nonlinearity H2 class: 2 <= alpha < 1 + 4/(d-4)^+, d <= 7
            if (d > 7)
                throw std::invalid_argument("power_range: H2-smooth scope requires d <= 7");
            return {{clopen_iv(two, one + four * plus_part_reciprocal(Rational(d - 4)))}};
        }
        case RangeScope::global_h1: {
            const Rational hi = lambda == -1
                                    ? one + four * plus_part_reciprocal(Rational(d - 2))
                                    : one + four / Rational(d);
            return {{open_iv(one, hi)}};
        }
        case RangeScope::global_h2: {
            if (d > 7)
                throw std::invalid_argument("power_range: global-H2 scope requires d <= 7");
            const Rational hi = lambda == -1
                                    ? one + four * plus_part_reciprocal(Rational(d - 2))
                                    : one + four / Rational(d);
            return {{clopen_iv(two, hi)}};
        }
    }
    throw std::invalid_argument("power_range: unknown scope");
}

enum class PairContext { step1, ycor_d4, ycor_d567, yglob };

inline std::string to_string(PairContext c) {
    switch (c) {
        case PairContext::step1: return "step1";
        case PairContext::ycor_d4: return "ycor-d4";
        case PairContext::ycor_d567: return "ycor-d567";
        case PairContext::yglob: return "yglob";
    }
    return "?";
}

// Alpha range in which a pair context applies.
inline AlphaRange proof_pair_domain(int d, PairContext context) {
    const Rational one(1), two(2), four(4);
    switch (context) {
        case PairContext::step1:
            // needs q = 8a/(d(a-1)) > 2, i.e. a < d/(d-4) when d >= 5
            if (d <= 4) return {{open_iv(one, Rational::inf())}};
            return {{open_iv(one, Rational(d) / Rational(d - 4))}};
        case PairContext::ycor_d4:
            if (d != 4) throw std::invalid_argument("proof_pair: ycor-d4 requires d = 4");
            return {{clopen_iv(two, Rational::inf())}};
        case PairContext::ycor_d567:
            if (d < 5 || d > 7)
                throw std::invalid_argument("proof_pair: ycor-d567 requires d in {5,6,7}");
            return {{clopen_iv(two, one + four / Rational(d - 4))}};
        case PairContext::yglob:
            if (d > 7) throw std::invalid_argument("proof_pair: yglob requires d <= 7");
            return {{clopen_iv(two, one + four * plus_part_reciprocal(Rational(d - 2)))}};
    }
    throw std::invalid_argument("proof_pair: unknown context");
}

// The exact pairs used by the fixed-point arguments, certified admissible.
inline StrichartzPair proof_pair(int d, const Rational& alpha, PairContext context) {
    if (!proof_pair_domain(d, context).contains(alpha))
        throw std::invalid_argument("proof_pair: alpha = " + alpha.to_string() +
                                    " outside the admitted range " +
                                    proof_pair_domain(d, context).to_string() + " for context " +
                                    to_string(context));
    const Rational one(1), four(4), eight(8);
    Rational p, q;
    switch (context) {
        case PairContext::step1:
            p = four * alpha / (alpha + one);
            q = eight * alpha / (Rational(d) * (alpha - one));
            break;
        case PairContext::ycor_d4:
            p = Rational(2) * (alpha + Rational(2)) / (alpha + one);
            q = alpha + Rational(2);
            break;
        case PairContext::ycor_d567:
            p = Rational(d) * (alpha + one) / (Rational(d) + Rational(2) * alpha - Rational(2));
            q = four * (alpha + one) / (Rational(d - 4) * (alpha - one));
            break;
        case PairContext::yglob:
            p = alpha + one;
            q = four * (alpha + one) / (Rational(d) * (alpha - one));
            break;
    }
    StrichartzPair pair{p, q, d};
    const auto cert = check_admissible(d, pair.p, pair.q);
    if (!cert.admissible)
        throw std::logic_error("proof_pair: produced non-admissible pair " + pair.to_string() +
                               " (" + cert.detail + ")");
    return pair;
}

}  // namespace snls
