#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include <gmpxx.h>

#include "acirc/errors.hpp"

namespace acirc {

enum class FieldKind { Rationals, PrimeField };

/// Exact base field: either Q (arbitrary-precision rationals) or F_p for a
/// prime p < 2^61. Prime-field elements are 64-bit residues; products go
/// through 128-bit intermediates, so no modulus-size tricks are needed.
struct FieldSpec {
    FieldKind kind = FieldKind::Rationals;
    std::uint64_t modulus = 0; // present iff kind == PrimeField

    bool operator==(const FieldSpec&) const = default;
};

bool is_prime_u64(std::uint64_t n);

class Fe;

class Field {
public:
    static Field rationals() { return Field(FieldSpec{FieldKind::Rationals, 0}); }
    static Field prime(std::uint64_t p);
    static Field make(const FieldSpec& spec);

    const FieldSpec& spec() const { return spec_; }
    std::uint64_t characteristic() const { return spec_.modulus; } // 0 for Q
    bool is_prime_field() const { return spec_.kind == FieldKind::PrimeField; }

    Fe zero() const;
    Fe one() const;
    Fe minus_one() const;
    /// The element 1/2; errors in characteristic 2 (the permanent gadget
    /// needs it, see the K matrix).
    Fe half() const;
    Fe element(long n) const;
    Fe element(const mpz_class& n) const;
    /// a/b as a field element; over F_p the denominator must not vanish.
    Fe element(const mpz_class& num, const mpz_class& den) const;
    /// Parses circuit-file literals: decimal integers, `a/b`, leading `-`.
    Fe parse_literal(const std::string& text) const;

    std::string describe() const; // "Q" or "Fp 101"

    bool operator==(const Field& other) const { return spec_ == other.spec_; }

private:
    explicit Field(const FieldSpec& spec) : spec_(spec) {}
    FieldSpec spec_;
};

/// Immutable field element. Carries its modulus (0 = rational) so mixed-field
/// arithmetic is caught instead of silently wrong.
class Fe {
public:
    Fe() : p_(0), r_(0), q_(0) {}

    std::uint64_t modulus() const { return p_; }
    bool is_rational() const { return p_ == 0; }
    bool is_zero() const { return p_ ? r_ == 0 : q_ == 0; }
    bool is_one() const { return p_ ? r_ == 1 : q_ == 1; }

    const mpq_class& rational() const { return q_; }
    std::uint64_t residue() const { return r_; }

    /// True when the value is an integer (residues always are).
    bool is_integer() const { return p_ != 0 || q_.get_den() == 1; }

    Fe operator+(const Fe& o) const;
    Fe operator-(const Fe& o) const;
    Fe operator*(const Fe& o) const;
    Fe operator/(const Fe& o) const;
    Fe operator-() const;
    Fe inv() const;
    Fe pow(std::uint64_t e) const;

    Fe& operator+=(const Fe& o) { *this = *this + o; return *this; }
    Fe& operator-=(const Fe& o) { *this = *this - o; return *this; }
    Fe& operator*=(const Fe& o) { *this = *this * o; return *this; }

    bool operator==(const Fe& o) const;
    bool operator!=(const Fe& o) const { return !(*this == o); }
    bool operator<(const Fe& o) const; // canonical order, for map keys

    std::string str() const;

    static Fe make_rational(const mpq_class& q);
    static Fe make_residue(std::uint64_t p, std::uint64_t r) { return Fe(p, r % p); }

private:
    Fe(std::uint64_t p, std::uint64_t r) : p_(p), r_(r), q_(0) {}

    void check_same(const Fe& o) const {
        if (p_ != o.p_) fail(Errc::FieldMismatch, "elements of different fields");
    }

    std::uint64_t p_; // 0 = rational
    std::uint64_t r_; // residue when p_ != 0
    mpq_class q_;     // value when p_ == 0
};

std::ostream& operator<<(std::ostream& os, const Fe& x);

std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t p);
std::uint64_t powmod_u64(std::uint64_t a, std::uint64_t e, std::uint64_t p);
std::uint64_t invmod_u64(std::uint64_t a, std::uint64_t p);

} // namespace acirc
