#pragma once

// Exact rational arithmetic on arbitrary-precision integers, plus a tagged
// +infinity value. Floating point never enters: every operation is exact and
// results are kept in lowest terms.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace snls {

// Unsigned arbitrary-precision integer, little-endian 32-bit limbs.
class Nat {
  public:
    Nat() = default;
    Nat(std::uint64_t v) {
        while (v) {
            limbs_.push_back(static_cast<std::uint32_t>(v));
            v >>= 32;
        }
    }

    bool is_zero() const { return limbs_.empty(); }
    bool is_even() const { return limbs_.empty() || (limbs_[0] & 1u) == 0; }

    static int compare(const Nat& a, const Nat& b) {
        if (a.limbs_.size() != b.limbs_.size())
            return a.limbs_.size() < b.limbs_.size() ? -1 : 1;
        for (std::size_t i = a.limbs_.size(); i-- > 0;)
            if (a.limbs_[i] != b.limbs_[i]) return a.limbs_[i] < b.limbs_[i] ? -1 : 1;
        return 0;
    }

    friend bool operator==(const Nat& a, const Nat& b) { return compare(a, b) == 0; }
    friend bool operator<(const Nat& a, const Nat& b) { return compare(a, b) < 0; }
    friend bool operator<=(const Nat& a, const Nat& b) { return compare(a, b) <= 0; }

    friend Nat operator+(const Nat& a, const Nat& b) {
        Nat r;
        const std::size_t n = std::max(a.limbs_.size(), b.limbs_.size());
        r.limbs_.resize(n);
        std::uint64_t carry = 0;
        for (std::size_t i = 0; i < n; ++i) {
            std::uint64_t s = carry;
            if (i < a.limbs_.size()) s += a.limbs_[i];
            if (i < b.limbs_.size()) s += b.limbs_[i];
            r.limbs_[i] = static_cast<std::uint32_t>(s);
            carry = s >> 32;
        }
        if (carry) r.limbs_.push_back(static_cast<std::uint32_t>(carry));
        return r;
    }

    // Requires a >= b.
    friend Nat operator-(const Nat& a, const Nat& b) {
        Nat r;
        r.limbs_.resize(a.limbs_.size());
        std::int64_t borrow = 0;
        for (std::size_t i = 0; i < a.limbs_.size(); ++i) {
            std::int64_t s = static_cast<std::int64_t>(a.limbs_[i]) - borrow -
                             (i < b.limbs_.size() ? static_cast<std::int64_t>(b.limbs_[i]) : 0);
            borrow = 0;
            if (s < 0) {
                s += (std::int64_t{1} << 32);
                borrow = 1;
            }
            r.limbs_[i] = static_cast<std::uint32_t>(s);
        }
        if (borrow) throw std::invalid_argument("Nat: subtraction underflow");
        r.trim();
        return r;
    }

    friend Nat operator*(const Nat& a, const Nat& b) {
        if (a.is_zero() || b.is_zero()) return Nat();
        Nat r;
        r.limbs_.assign(a.limbs_.size() + b.limbs_.size(), 0);
        for (std::size_t i = 0; i < a.limbs_.size(); ++i) {
            std::uint64_t carry = 0;
            for (std::size_t j = 0; j < b.limbs_.size(); ++j) {
                std::uint64_t cur = r.limbs_[i + j] +
                                    static_cast<std::uint64_t>(a.limbs_[i]) * b.limbs_[j] + carry;
                r.limbs_[i + j] = static_cast<std::uint32_t>(cur);
                carry = cur >> 32;
            }
            std::size_t k = i + b.limbs_.size();
            while (carry) {
                std::uint64_t cur = r.limbs_[k] + carry;
                r.limbs_[k] = static_cast<std::uint32_t>(cur);
                carry = cur >> 32;
                ++k;
            }
        }
        r.trim();
        return r;
    }

    // Shift-and-subtract long division; sizes here stay tiny.
    static void divmod(const Nat& a, const Nat& b, Nat& q, Nat& r) {
        if (b.is_zero()) throw std::invalid_argument("Nat: division by zero");
        q = Nat();
        r = Nat();
        if (a.is_zero()) return;
        q.limbs_.assign(a.limbs_.size(), 0);
        for (std::size_t bit = a.bit_length(); bit-- > 0;) {
            r.shl1();
            if (a.bit(bit)) r.set_bit(0);
            if (compare(r, b) >= 0) {
                r = r - b;
                q.set_bit(bit);
            }
        }
        q.trim();
    }

    friend Nat operator/(const Nat& a, const Nat& b) {
        Nat q, r;
        divmod(a, b, q, r);
        return q;
    }
    friend Nat operator%(const Nat& a, const Nat& b) {
        Nat q, r;
        divmod(a, b, q, r);
        return r;
    }

    static Nat gcd(Nat a, Nat b) {
        while (!b.is_zero()) {
            Nat q, r;
            divmod(a, b, q, r);
            a = b;
            b = r;
        }
        return a.is_zero() ? Nat(1) : a;
    }

    double to_double() const {
        double v = 0.0;
        for (std::size_t i = limbs_.size(); i-- > 0;) v = v * 4294967296.0 + limbs_[i];
        return v;
    }

    std::uint64_t to_u64() const {
        std::uint64_t v = 0;
        if (limbs_.size() > 2) throw std::overflow_error("Nat: does not fit u64");
        for (std::size_t i = limbs_.size(); i-- > 0;) v = (v << 32) | limbs_[i];
        return v;
    }

    std::string to_string() const {
        if (is_zero()) return "0";
        std::string out;
        Nat cur = *this;
        const Nat ten(10);
        while (!cur.is_zero()) {
            Nat q, r;
            divmod(cur, ten, q, r);
            out.push_back(static_cast<char>('0' + (r.is_zero() ? 0 : r.limbs_[0])));
            cur = q;
        }
        return std::string(out.rbegin(), out.rend());
    }

  private:
    std::vector<std::uint32_t> limbs_;

    void trim() {
        while (!limbs_.empty() && limbs_.back() == 0) limbs_.pop_back();
    }
    std::size_t bit_length() const {
        if (limbs_.empty()) return 0;
        std::size_t bits = (limbs_.size() - 1) * 32;
        std::uint32_t top = limbs_.back();
        while (top) {
            ++bits;
            top >>= 1;
        }
        return bits;
    }
    bool bit(std::size_t i) const {
        const std::size_t limb = i / 32;
        if (limb >= limbs_.size()) return false;
        return (limbs_[limb] >> (i % 32)) & 1u;
    }
    void set_bit(std::size_t i) {
        const std::size_t limb = i / 32;
        if (limb >= limbs_.size()) limbs_.resize(limb + 1, 0);
        limbs_[limb] |= (1u << (i % 32));
    }
    void shl1() {
        std::uint32_t carry = 0;
        for (auto& l : limbs_) {
            const std::uint32_t nc = l >> 31;
            l = (l << 1) | carry;
            carry = nc;
        }
        if (carry) limbs_.push_back(carry);
    }
};

// Exact rational q = sign * num/den in lowest terms, or the tagged +infinity.
class Rational {
  public:
    Rational() : sign_(0), num_(0), den_(1) {}
    Rational(std::int64_t v)
        : sign_(v > 0 ? 1 : (v < 0 ? -1 : 0)),
          num_(static_cast<std::uint64_t>(v < 0 ? -v : v)),
          den_(1) {}
    Rational(std::int64_t num, std::int64_t den) {
        if (den == 0) throw std::invalid_argument("rational: zero denominator");
        int s = 1;
        if (num < 0) {
            s = -s;
            num = -num;
        }
        if (den < 0) {
            s = -s;
            den = -den;
        }
        num_ = Nat(static_cast<std::uint64_t>(num));
        den_ = Nat(static_cast<std::uint64_t>(den));
        sign_ = num == 0 ? 0 : s;
        normalize();
    }
    Rational(int s, Nat num, Nat den) : sign_(s), num_(std::move(num)), den_(std::move(den)) {
        if (den_.is_zero()) throw std::invalid_argument("rational: zero denominator");
        if (num_.is_zero()) sign_ = 0;
        normalize();
    }

    static Rational inf() {
        Rational r;
        r.infinite_ = true;
        r.sign_ = 1;
        return r;
    }

    bool is_inf() const { return infinite_; }
    bool is_zero() const { return !infinite_ && sign_ == 0; }
    int sign() const { return infinite_ ? 1 : sign_; }
    const Nat& num() const { return num_; }
    const Nat& den() const { return den_; }

    friend bool operator==(const Rational& a, const Rational& b) {
        if (a.infinite_ || b.infinite_) return a.infinite_ && b.infinite_;
        return a.sign_ == b.sign_ && a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }

    friend bool operator<(const Rational& a, const Rational& b) {
        if (a.infinite_) return false;
        if (b.infinite_) return true;
        if (a.sign_ != b.sign_) return a.sign_ < b.sign_;
        if (a.sign_ == 0) return false;
        const int c = Nat::compare(a.num_ * b.den_, b.num_ * a.den_);
        return a.sign_ > 0 ? c < 0 : c > 0;
    }
    friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
    friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
    friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

    friend Rational operator+(const Rational& a, const Rational& b) {
        if (a.infinite_ || b.infinite_) return inf();
        // sign combination through signed cross products
        const Nat l = a.num_ * b.den_;
        const Nat r = b.num_ * a.den_;
        const Nat den = a.den_ * b.den_;
        const int sl = a.sign_, sr = b.sign_;
        if (sl == 0) return Rational(sr, r, den);
        if (sr == 0) return Rational(sl, l, den);
        if (sl == sr) return Rational(sl, l + r, den);
        const int c = Nat::compare(l, r);
        if (c == 0) return Rational();
        return c > 0 ? Rational(sl, l - r, den) : Rational(sr, r - l, den);
    }
    friend Rational operator-(const Rational& a) {
        if (a.infinite_) throw std::invalid_argument("rational: negating infinity");
        Rational r = a;
        r.sign_ = -r.sign_;
        return r;
    }
    friend Rational operator-(const Rational& a, const Rational& b) {
        if (b.infinite_) throw std::invalid_argument("rational: subtracting infinity");
        return a + (-b);
    }
    friend Rational operator*(const Rational& a, const Rational& b) {
        if (a.infinite_ || b.infinite_) {
            if (a.is_zero() || b.is_zero())
                throw std::invalid_argument("rational: 0 * infinity");
            if (a.sign() < 0 || b.sign() < 0)
                throw std::invalid_argument("rational: negative * infinity");
            return inf();
        }
        return Rational(a.sign_ * b.sign_, a.num_ * b.num_, a.den_ * b.den_);
    }
    friend Rational operator/(const Rational& a, const Rational& b) {
        if (b.infinite_) {
            if (a.infinite_) throw std::invalid_argument("rational: inf/inf");
            return Rational();
        }
        if (b.is_zero()) throw std::invalid_argument("rational: division by zero");
        if (a.infinite_) {
            if (b.sign() < 0) throw std::invalid_argument("rational: infinity / negative");
            return inf();
        }
        return Rational(a.sign_ * b.sign_, a.num_ * b.den_, a.den_ * b.num_);
    }

    double to_double() const {
        if (infinite_) return std::numeric_limits<double>::infinity();
        if (sign_ == 0) return 0.0;
        return sign_ * num_.to_double() / den_.to_double();
    }

    std::string to_string() const {
        if (infinite_) return "inf";
        if (sign_ == 0) return "0";
        std::string s = sign_ < 0 ? "-" : "";
        s += num_.to_string();
        if (!(den_ == Nat(1))) s += "/" + den_.to_string();
        return s;
    }

    // Parses "inf", "n", "-n", "n/d".
    static Rational parse(const std::string& text) {
        if (text == "inf" || text == "+inf") return inf();
        const auto slash = text.find('/');
        auto to_int = [](const std::string& t) {
            std::size_t pos = 0;
            const long long v = std::stoll(t, &pos);
            if (pos != t.size()) throw std::invalid_argument("rational: parse error: " + t);
            return v;
        };
        if (slash == std::string::npos) return Rational(to_int(text));
        return Rational(to_int(text.substr(0, slash)), to_int(text.substr(slash + 1)));
    }

    // Nearest rational with denominator <= max_den via continued fractions.
    // Approximation helper for warnings; exact arithmetic never calls this.
    static Rational from_double(double x, std::int64_t max_den = 1000000) {
        if (std::isinf(x) && x > 0) return inf();
        if (!std::isfinite(x)) throw std::invalid_argument("rational: not finite");
        const int s = x < 0 ? -1 : 1;
        x = std::fabs(x);
        std::int64_t p0 = 0, q0 = 1, p1 = 1, q1 = 0;
        double frac = x;
        for (int it = 0; it < 64; ++it) {
            const double fl = std::floor(frac);
            if (fl > 9.0e17) break;
            const std::int64_t a = static_cast<std::int64_t>(fl);
            if (q0 + a * q1 > max_den && q1 > 0) break;
            const std::int64_t p2 = a * p1 + p0;
            const std::int64_t q2 = a * q1 + q0;
            p0 = p1;
            q0 = q1;
            p1 = p2;
            q1 = q2;
            const double rem = frac - fl;
            if (rem < 1e-15) break;
            frac = 1.0 / rem;
        }
        return Rational(s * p1, q1 == 0 ? 1 : q1);
    }

  private:
    bool infinite_ = false;
    int sign_ = 0;  // -1, 0, +1
    Nat num_{0};
    Nat den_{1};

    void normalize() {
        if (sign_ == 0) {
            num_ = Nat(0);
            den_ = Nat(1);
            return;
        }
        const Nat g = Nat::gcd(num_, den_);
        num_ = num_ / g;
        den_ = den_ / g;
    }
};

}  // namespace snls
