#include "acirc/field.hpp"

#include <ostream>

namespace acirc {

const char* errc_name(Errc c) {
    switch (c) {
        case Errc::NotPrime: return "NotPrime";
        case Errc::RationalOverPrimeField: return "RationalOverPrimeField";
        case Errc::DivisionByZero: return "DivisionByZero";
        case Errc::FieldMismatch: return "FieldMismatch";
        case Errc::CharacteristicTwo: return "CharacteristicTwo";
        case Errc::CharacteristicTooSmall: return "CharacteristicTooSmall";
        case Errc::SyntaxError: return "SyntaxError";
        case Errc::UnknownGateRef: return "UnknownGateRef";
        case Errc::CycleDetected: return "CycleDetected";
        case Errc::DuplicateGateId: return "DuplicateGateId";
        case Errc::FieldLiteralInvalid: return "FieldLiteralInvalid";
        case Errc::BudgetExceeded: return "BudgetExceeded";
        case Errc::MissingAssignment: return "MissingAssignment";
        case Errc::UnknownVariable: return "UnknownVariable";
        case Errc::NotMultilinear: return "NotMultilinear";
        case Errc::BlocksNotPartition: return "BlocksNotPartition";
        case Errc::NonIntegerCoefficients: return "NonIntegerCoefficients";
        case Errc::NotAFormula: return "NotAFormula";
        case Errc::NotWeaklySkew: return "NotWeaklySkew";
        case Errc::NotSingleOutput: return "NotSingleOutput";
        case Errc::DegreeBoundTooSmall: return "DegreeBoundTooSmall";
        case Errc::DuplicateEdge: return "DuplicateEdge";
        case Errc::SharedEndpoints: return "SharedEndpoints";
        case Errc::UnusedYVariable: return "UnusedYVariable";
        case Errc::SizeBoundViolated: return "SizeBoundViolated";
        case Errc::FieldTooSmall: return "FieldTooSmall";
        case Errc::TooManyVariables: return "TooManyVariables";
        case Errc::NotConstantFree: return "NotConstantFree";
        case Errc::NotMultDisjoint: return "NotMultDisjoint";
        case Errc::ParamOutOfRange: return "ParamOutOfRange";
        case Errc::UnknownArtifactKind: return "UnknownArtifactKind";
        case Errc::BadMatrix: return "BadMatrix";
        case Errc::BadAbp: return "BadAbp";
        case Errc::Usage: return "Usage";
    }
    return "Error";
}

std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % p);
}

std::uint64_t powmod_u64(std::uint64_t a, std::uint64_t e, std::uint64_t p) {
    std::uint64_t acc = 1 % p;
    a %= p;
    while (e) {
        if (e & 1) acc = mulmod_u64(acc, a, p);
        a = mulmod_u64(a, a, p);
        e >>= 1;
    }
    return acc;
}

std::uint64_t invmod_u64(std::uint64_t a, std::uint64_t p) {
    if (a % p == 0) fail(Errc::DivisionByZero, "inverse of zero mod " + std::to_string(p));
    // extended Euclid over signed 128-bit to keep intermediates safe
    __int128 t = 0, new_t = 1;
    __int128 r = p, new_r = a % p;
    while (new_r != 0) {
        __int128 q = r / new_r;
        __int128 tmp = t - q * new_t;
        t = new_t;
        new_t = tmp;
        tmp = r - q * new_r;
        r = new_r;
        new_r = tmp;
    }
    if (t < 0) t += p;
    return static_cast<std::uint64_t>(t);
}

namespace {

bool miller_rabin(std::uint64_t n, std::uint64_t a) {
    if (a % n == 0) return true;
    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) { d >>= 1; ++s; }
    std::uint64_t x = powmod_u64(a, d, n);
    if (x == 1 || x == n - 1) return true;
    for (int i = 1; i < s; ++i) {
        x = mulmod_u64(x, x, n);
        if (x == n - 1) return true;
    }
    return false;
}

} // namespace

bool is_prime_u64(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t q : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n == q) return true;
        if (n % q == 0) return false;
    }
    if (n < 1ull << 32) {
        // trial division; sqrt fits in 16 bits beyond the table above
        for (std::uint64_t d = 41; d * d <= n; d += 2)
            if (n % d == 0) return false;
        return true;
    }
    // deterministic Miller-Rabin for n < 3.3 * 10^24 with these bases
    for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull})
        if (!miller_rabin(n, a)) return false;
    return true;
}

Field Field::prime(std::uint64_t p) {
    if (p > (1ull << 61)) fail(Errc::ParamOutOfRange, "modulus above 2^61");
    if (!is_prime_u64(p)) fail(Errc::NotPrime, std::to_string(p));
    return Field(FieldSpec{FieldKind::PrimeField, p});
}

Field Field::make(const FieldSpec& spec) {
    return spec.kind == FieldKind::Rationals ? rationals() : prime(spec.modulus);
}

Fe Field::zero() const { return element(0); }
Fe Field::one() const { return element(1); }
Fe Field::minus_one() const { return element(-1); }

Fe Field::half() const {
    if (characteristic() == 2) fail(Errc::CharacteristicTwo, "1/2 does not exist");
    return element(mpz_class(1), mpz_class(2));
}

Fe Field::element(long n) const { return element(mpz_class(n)); }

Fe Field::element(const mpz_class& n) const {
    if (!is_prime_field()) return Fe::make_rational(mpq_class(n));
    mpz_class m = n % mpz_class(mpz_class(spec_.modulus));
    if (m < 0) m += mpz_class(spec_.modulus);
    return Fe::make_residue(spec_.modulus, m.get_ui());
}

Fe Field::element(const mpz_class& num, const mpz_class& den) const {
    if (den == 0) fail(Errc::DivisionByZero, "zero denominator");
    if (!is_prime_field()) {
        mpq_class q(num, den);
        q.canonicalize();
        return Fe::make_rational(q);
    }
    Fe d = element(den);
    if (d.is_zero())
        fail(Errc::RationalOverPrimeField,
             den.get_str() + " vanishes mod " + std::to_string(spec_.modulus));
    return element(num) / d;
}

Fe Field::parse_literal(const std::string& text) const {
    if (text.empty()) fail(Errc::FieldLiteralInvalid, "empty literal");
    auto slash = text.find('/');
    try {
        if (slash == std::string::npos) return element(mpz_class(text));
        mpz_class num(text.substr(0, slash));
        mpz_class den(text.substr(slash + 1));
        return element(num, den);
    } catch (const std::invalid_argument&) {
        fail(Errc::FieldLiteralInvalid, "'" + text + "'");
    }
}

std::string Field::describe() const {
    return is_prime_field() ? "Fp " + std::to_string(spec_.modulus) : "Q";
}

Fe Fe::make_rational(const mpq_class& q) {
    Fe x;
    x.q_ = q;
    x.q_.canonicalize();
    return x;
}

Fe Fe::operator+(const Fe& o) const {
    check_same(o);
    if (p_) {
        std::uint64_t s = r_ + o.r_;
        if (s >= p_) s -= p_;
        return Fe(p_, s);
    }
    return make_rational(q_ + o.q_);
}

Fe Fe::operator-(const Fe& o) const {
    check_same(o);
    if (p_) return Fe(p_, r_ >= o.r_ ? r_ - o.r_ : r_ + p_ - o.r_);
    return make_rational(q_ - o.q_);
}

Fe Fe::operator*(const Fe& o) const {
    check_same(o);
    if (p_) return Fe(p_, mulmod_u64(r_, o.r_, p_));
    return make_rational(q_ * o.q_);
}

Fe Fe::operator/(const Fe& o) const {
    check_same(o);
    return *this * o.inv();
}

Fe Fe::operator-() const {
    if (p_) return Fe(p_, r_ == 0 ? 0 : p_ - r_);
    return make_rational(-q_);
}

Fe Fe::inv() const {
    if (is_zero()) fail(Errc::DivisionByZero, "inverse of zero");
    if (p_) return Fe(p_, invmod_u64(r_, p_));
    return make_rational(1 / q_);
}

Fe Fe::pow(std::uint64_t e) const {
    if (p_) return Fe(p_, powmod_u64(r_, e, p_));
    Fe acc = make_rational(1), base = *this;
    while (e) {
        if (e & 1) acc = acc * base;
        base = base * base;
        e >>= 1;
    }
    return acc;
}

bool Fe::operator==(const Fe& o) const {
    if (p_ != o.p_) return false;
    return p_ ? r_ == o.r_ : q_ == o.q_;
}

bool Fe::operator<(const Fe& o) const {
    if (p_ != o.p_) return p_ < o.p_;
    return p_ ? r_ < o.r_ : q_ < o.q_;
}

std::string Fe::str() const {
    return p_ ? std::to_string(r_) : q_.get_str();
}

std::ostream& operator<<(std::ostream& os, const Fe& x) { return os << x.str(); }

} // namespace acirc
