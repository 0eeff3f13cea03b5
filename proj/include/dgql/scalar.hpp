#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <gmpxx.h>

#include "dgql/errors.hpp"

namespace dgql {

enum class FieldKind { Rational, Prime };

struct Field {
    FieldKind kind = FieldKind::Rational;
    long p = 0; // modulus, prime case only

    static Field rationals() { return Field{FieldKind::Rational, 0}; }
    static Field prime(long p);

    bool operator==(const Field& o) const { return kind == o.kind && p == o.p; }
    bool operator!=(const Field& o) const { return !(*this == o); }

    std::string to_string() const {
        return kind == FieldKind::Rational ? "rational" : "prime " + std::to_string(p);
    }
};

inline bool is_prime_long(long n) {
    if (n < 2) return false;
    for (long d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

inline Field Field::prime(long p) {
    if (!is_prime_long(p)) throw PreconditionError("field modulus " + std::to_string(p) + " is not prime");
    return Field{FieldKind::Prime, p};
}

// Exact field element. Rationals are GMP-backed, always canonical (lowest terms,
// positive denominator); prime-field values live in [0, p).
class Scalar {
  public:
    Scalar() = default;
    static Scalar zero(const Field& f) { return from_int(f, 0); }
    static Scalar one(const Field& f) { return from_int(f, 1); }

    static Scalar from_int(const Field& f, long long n) {
        Scalar s;
        s.field_ = f;
        if (f.kind == FieldKind::Rational) {
            s.q_ = mpq_class(static_cast<long>(n));
        } else {
            long r = static_cast<long>(n % f.p);
            s.v_ = r < 0 ? r + f.p : r;
        }
        return s;
    }

    static Scalar from_fraction(const Field& f, long long num, long long den) {
        if (den == 0) throw ParseError("zero denominator in coefficient");
        if (f.kind == FieldKind::Rational) {
            Scalar s;
            s.field_ = f;
            s.q_ = mpq_class(static_cast<long>(num), static_cast<long>(den));
            s.q_.canonicalize();
            return s;
        }
        return from_int(f, num) * from_int(f, den).inverse();
    }

    const Field& field() const { return field_; }

    bool is_zero() const {
        return field_.kind == FieldKind::Rational ? sgn(q_) == 0 : v_ == 0;
    }
    bool is_one() const {
        return field_.kind == FieldKind::Rational ? q_ == 1 : v_ == 1;
    }

    Scalar operator-() const {
        Scalar r = *this;
        if (field_.kind == FieldKind::Rational)
            r.q_ = -q_;
        else
            r.v_ = v_ == 0 ? 0 : field_.p - v_;
        return r;
    }

    Scalar operator+(const Scalar& o) const {
        check(o);
        Scalar r = *this;
        if (field_.kind == FieldKind::Rational)
            r.q_ = q_ + o.q_;
        else
            r.v_ = (v_ + o.v_) % field_.p;
        return r;
    }
    Scalar operator-(const Scalar& o) const { return *this + (-o); }

    Scalar operator*(const Scalar& o) const {
        check(o);
        Scalar r = *this;
        if (field_.kind == FieldKind::Rational)
            r.q_ = q_ * o.q_;
        else
            r.v_ = static_cast<long>((static_cast<__int128>(v_) * o.v_) % field_.p);
        return r;
    }

    Scalar inverse() const {
        if (is_zero()) throw PreconditionError("inverse of zero");
        Scalar r = *this;
        if (field_.kind == FieldKind::Rational) {
            r.q_ = 1 / q_;
        } else {
            // extended Euclid; v_ is a unit since p is prime
            long t = 0, newt = 1, rr = field_.p, newr = v_;
            while (newr != 0) {
                long q = rr / newr;
                long tmp = t - q * newt;
                t = newt;
                newt = tmp;
                tmp = rr - q * newr;
                rr = newr;
                newr = tmp;
            }
            r.v_ = t < 0 ? t + field_.p : t;
        }
        return r;
    }

    Scalar operator/(const Scalar& o) const { return *this * o.inverse(); }

    Scalar& operator+=(const Scalar& o) { return *this = *this + o; }
    Scalar& operator-=(const Scalar& o) { return *this = *this - o; }
    Scalar& operator*=(const Scalar& o) { return *this = *this * o; }

    bool operator==(const Scalar& o) const {
        check(o);
        return field_.kind == FieldKind::Rational ? q_ == o.q_ : v_ == o.v_;
    }
    bool operator!=(const Scalar& o) const { return !(*this == o); }

    std::string to_string() const {
        if (field_.kind == FieldKind::Prime) return std::to_string(v_);
        return q_.get_str();
    }

    // raw access (rational / prime value respectively)
    const mpq_class& rat() const {
        if (field_.kind != FieldKind::Rational) throw PreconditionError("not a rational scalar");
        return q_;
    }
    long residue() const {
        if (field_.kind != FieldKind::Prime) throw PreconditionError("not a prime-field scalar");
        return v_;
    }

  private:
    void check(const Scalar& o) const {
        if (field_ != o.field_) throw PreconditionError("scalars from incompatible fields");
    }

    Field field_;
    mpq_class q_;
    long v_ = 0;
};

// Literal syntax shared with the CLI: <int> or <int>/<int>; over prime fields an
// integer reduced mod p.
inline Scalar parse_scalar(const Field& f, std::string_view tok) {
    auto is_int = [](std::string_view s) {
        if (s.empty()) return false;
        size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
        if (i == s.size()) return false;
        for (; i < s.size(); ++i)
            if (s[i] < '0' || s[i] > '9') return false;
        return true;
    };
    auto slash = tok.find('/');
    try {
        if (slash == std::string_view::npos) {
            if (!is_int(tok)) throw ParseError("bad coefficient '" + std::string(tok) + "'");
            return Scalar::from_int(f, std::stoll(std::string(tok)));
        }
        std::string_view num = tok.substr(0, slash), den = tok.substr(slash + 1);
        if (!is_int(num) || !is_int(den)) throw ParseError("bad coefficient '" + std::string(tok) + "'");
        long long d = std::stoll(std::string(den));
        if (d == 0) throw ParseError("zero denominator in coefficient '" + std::string(tok) + "'");
        return Scalar::from_fraction(f, std::stoll(std::string(num)), d);
    } catch (const std::out_of_range&) {
        throw ParseError("coefficient out of range '" + std::string(tok) + "'");
    }
}

} // namespace dgql
