#include "faberlab/exact_lens.hpp"

#include <stdexcept>

namespace faberlab::lens {

// ---- LensPolynomial -------------------------------------------------------

bool LensPolynomial::is_zero() const
{
    for (const auto& c : coeffs_)
        if (!c.is_zero())
            return false;
    return true;
}

int LensPolynomial::degree() const
{
    for (std::size_t i = coeffs_.size(); i-- > 0;)
        if (!coeffs_[i].is_zero())
            return base() + 2 * static_cast<int>(i);
    return -1;
}

BigRational LensPolynomial::coeff(int exponent) const
{
    if (exponent < base() || (exponent - base()) % 2 != 0)
        return BigRational(0);
    const auto i = static_cast<std::size_t>((exponent - base()) / 2);
    return i < coeffs_.size() ? coeffs_[i] : BigRational(0);
}

void LensPolynomial::set(int exponent, BigRational value)
{
    if (exponent < 0 || (exponent - base()) % 2 != 0) {
        if (value.is_zero())
            return;
        throw std::invalid_argument("LensPolynomial::set: exponent " + std::to_string(exponent) +
                                    " has the wrong parity");
    }
    const auto i = static_cast<std::size_t>((exponent - base()) / 2);
    if (i >= coeffs_.size())
        coeffs_.resize(i + 1);
    coeffs_[i] = std::move(value);
}

std::map<int, BigRational> LensPolynomial::terms() const
{
    std::map<int, BigRational> out;
    for (std::size_t i = 0; i < coeffs_.size(); ++i)
        if (!coeffs_[i].is_zero())
            out.emplace(base() + 2 * static_cast<int>(i), coeffs_[i]);
    return out;
}

bool operator==(const LensPolynomial& a, const LensPolynomial& b)
{
    if (a.is_zero() || b.is_zero())
        return a.is_zero() && b.is_zero();
    return a.parity_ == b.parity_ && a.terms() == b.terms();
}

// ---- sequences ------------------------------------------------------------

namespace {

BigInt pow2(unsigned long e)
{
    BigInt r;
    mpz_ui_pow_ui(r.get_mpz_t(), 2, e);
    return r;
}

} // namespace

BigRational a_seq(unsigned n)
{
    if (n % 2 != 0)
        return BigRational(0);
    return BigRational(binomial(n, n / 2), pow2(n));
}

BigRational a_seq_recurrence(unsigned n)
{
    if (n % 2 != 0)
        return BigRational(0);
    BigRational a(1);
    for (unsigned m = 2; m <= n; m += 2)
        a *= BigRational(BigInt(m - 1), BigInt(m));
    return a;
}

BigRational b_seq(unsigned n)
{
    if (n % 2 != 0)
        return BigRational(0);
    BigRational a(1), b(1);
    for (unsigned m = 2; m <= n; m += 2) {
        a *= BigRational(BigInt(m - 1), BigInt(m));
        b = BigRational(BigInt(m), BigInt(m + 1)) * b + a / BigRational(m + 1);
    }
    return b;
}

namespace {

// Binary splitting of sum_{j=lo}^{hi-1} prod_{i=lo}^{j-1} p(i)/q(i) = T/Q with
// P/Q = prod_{i=lo}^{hi-1} p(i)/q(i). The terms C(n+1,j)/(n+1-2j) have ratio
//   p(j)/q(j) = (n+1-j)(n+1-2j) / ((j+1)(n-1-2j)).
struct Split
{
    BigInt P, Q, T;
};

class ExplicitBSum
{
public:
    explicit ExplicitBSum(long n) : n_(n) {}

    Split run(long lo, long hi, bool need_p) const
    {
        if (hi - lo <= 16) {
            Split s;
            s.P = p(lo);
            s.Q = q(lo);
            s.T = s.Q;
            for (long j = lo + 1; j < hi; ++j) {
                s.T += s.P;
                mpz_mul_si(s.T.get_mpz_t(), s.T.get_mpz_t(), q(j));
                mpz_mul_si(s.P.get_mpz_t(), s.P.get_mpz_t(), p(j));
                mpz_mul_si(s.Q.get_mpz_t(), s.Q.get_mpz_t(), q(j));
            }
            return s;
        }
        const long mid = lo + (hi - lo) / 2;
        Split left = run(lo, mid, true);
        Split right = run(mid, hi, need_p);
        Split out;
        out.T = left.T * right.Q + left.P * right.T;
        out.Q = left.Q * right.Q;
        if (need_p)
            out.P = left.P * right.P;
        return out;
    }

private:
    long p(long j) const { return (n_ + 1 - j) * (n_ + 1 - 2 * j); }
    long q(long j) const { return (j + 1) * (n_ - 1 - 2 * j); }

    long n_;
};

// sum_j C(n+1,j)/(n+1-2j) = T / ((n+1) Q)
Split explicit_b_parts(unsigned n)
{
    return ExplicitBSum(n).run(0, static_cast<long>(n / 2) + 1, false);
}

} // namespace

BigRational b_seq_explicit(unsigned n)
{
    if (n % 2 != 0)
        return BigRational(0);
    const Split s = explicit_b_parts(n);
    return BigRational(s.T, BigInt(s.Q * (n + 1) * pow2(n)));
}

bool matches_b_explicit(unsigned n, const BigRational& value)
{
    if (n % 2 != 0)
        return value.is_zero();
    const Split s = explicit_b_parts(n);
    // value = num/den ; explicit = T / (Q (n+1) 2^n)
    BigInt lhs = value.numerator() * s.Q;
    lhs *= n + 1;
    mpz_mul_2exp(lhs.get_mpz_t(), lhs.get_mpz_t(), n);
    return lhs == value.denominator() * s.T;
}

LensPolynomial g_poly(unsigned n)
{
    LensPolynomial g(parity_of(n));
    if (n == 0)
        return g;
    const BigInt scale = pow2(n);
    for (unsigned j = 0; j <= (n - 1) / 2; ++j)
        g.set(static_cast<int>(n - 2 * j), BigRational(binomial(n, j), scale));
    return g;
}

std::vector<LensPolynomial> g_poly_recurrence(unsigned n_max)
{
    std::vector<LensPolynomial> out;
    out.reserve(n_max + 1);
    out.emplace_back(Parity::even);
    const BigRational half(BigInt(1), BigInt(2));
    BigRational a_n(1);
    for (unsigned n = 0; n < n_max; ++n) {
        const LensPolynomial& g = out.back();
        const BigRational a_next = (n % 2 == 1) ? a_n * BigRational(BigInt(n), BigInt(n + 1)) : BigRational(0);
        const BigRational a_prev_even = (n % 2 == 0) ? a_n : BigRational(0);

        LensPolynomial next(parity_of(n + 1));
        std::map<int, BigRational> acc;
        for (const auto& [e, c] : g.terms()) {
            if (e == 0)
                throw std::logic_error("g_poly_recurrence: G_n acquired a constant term");
            acc[e + 1] += c * half;
            acc[e - 1] += c * half;
        }
        if (!a_prev_even.is_zero())
            acc[1] += a_prev_even * half;
        if (!a_next.is_zero())
            acc[0] -= a_next * half;
        for (auto& [e, c] : acc)
            next.set(e, std::move(c));
        if (!next.coeff(0).is_zero())
            throw std::logic_error("g_poly_recurrence: nonzero constant term");
        out.push_back(std::move(next));
        if (n % 2 == 1)
            a_n = a_next;
    }
    return out;
}

bool square_sum_identity_check(unsigned k)
{
    BigRational a(1), b(1), sum(1);
    for (unsigned m = 2; m <= 2 * k; m += 2) {
        a *= BigRational(BigInt(m - 1), BigInt(m));
        b = BigRational(BigInt(m), BigInt(m + 1)) * b + a / BigRational(m + 1);
        sum += a * a;
    }
    return sum == BigRational(2 * k + 1) * a * b;
}

// ---- LensSequences --------------------------------------------------------

LensSequences::LensSequences(unsigned n_max) : n_max_(n_max)
{
    a_.reserve(n_max + 1);
    b_.reserve(n_max + 1);
    ab_sum_.reserve(n_max + 1);
    a2_sum_.reserve(n_max + 1);
    for (unsigned n = 0; n <= n_max; ++n) {
        if (n == 0) {
            a_.emplace_back(1);
            b_.emplace_back(1);
        } else if (n == 1) {
            a_.emplace_back(0);
            b_.emplace_back(0);
        } else if (n % 2 == 1) {
            a_.emplace_back(0);
            b_.emplace_back(0);
        } else {
            a_.push_back(a_[n - 2] * BigRational(BigInt(n - 1), BigInt(n)));
            b_.push_back(BigRational(BigInt(n), BigInt(n + 1)) * b_[n - 2] + a_[n] / BigRational(n + 1));
        }
        if (n == 0) {
            ab_sum_.emplace_back(0);
            a2_sum_.emplace_back(1);
        } else {
            const unsigned k = n - 1;
            ab_sum_.push_back(k % 2 == 0 ? ab_sum_[k] + a_[k] * b_[k] / BigRational(k + 2) : ab_sum_[k]);
            a2_sum_.push_back(n % 2 == 0 ? a2_sum_[k] + a_[n] * a_[n] : a2_sum_[k]);
        }
    }
}

PiLinear LensSequences::i_diag(unsigned n) const
{
    if (n > n_max_)
        throw std::out_of_range("LensSequences::i_diag: n exceeds n_max");
    const BigRational m(n + 1);
    return {m / BigRational(4), -(m * ab_sum_[n]) - a2_sum_[n] / BigRational(2)};
}

std::vector<PiLinear> LensSequences::i_diag_all() const
{
    std::vector<PiLinear> out;
    out.reserve(n_max_ + 1);
    for (unsigned n = 0; n <= n_max_; ++n)
        out.push_back(i_diag(n));
    return out;
}

std::vector<PiLinear> LensSequences::i_odd_by_parts_all() const
{
    // I_{2N+1}/(2N+1) = pi/4 - 1/2 sum_{k<=N} a_{2k}^2/(2k+1)
    //                   - sum_{k<N} (sum_{j<=k} a_{2j}^2) / ((2k+1)(2k+2)(2k+3))
    std::vector<PiLinear> out;
    BigRational first, second;
    for (unsigned N = 0; 2 * N <= n_max_; ++N) {
        first += a_[2 * N] * a_[2 * N] / BigRational(2 * N + 1);
        if (N > 0) {
            const long k = N - 1;
            second += a2_sum_[2 * k] / BigRational((2 * k + 1) * (2 * k + 2) * (2 * k + 3));
        }
        const BigRational m(2 * N + 1);
        out.emplace_back(m / BigRational(4), -(m * (first / BigRational(2) + second)));
    }
    return out;
}

PiLinear i_diag_closed(unsigned n)
{
    return LensSequences(n).i_diag(n);
}

PiLinear i_odd_by_parts(unsigned N)
{
    return LensSequences(2 * N).i_odd_by_parts_all().back();
}

TaggedFloat lens_alpha_lower_bound(unsigned n, unsigned precision_bits)
{
    const PiLinear norm = i_diag_closed(n);
    TaggedFloat out;
    out.precision_bits = precision_bits;
    Real value;
    {
        ScopedPrecision scope(precision_bits + 32);
        value = norm.to_real(precision_bits + 32) / (pi<Real>() * Real(n + 1));
    }
    mpfr_set_prec(out.value.backend().data(), precision_bits);
    mpfr_set(out.value.backend().data(), value.backend().data(), MPFR_RNDN);
    return out;
}

// ---- even relation ----------------------------------------------------------

std::vector<EvenRelationRow> even_relation_rows(const LensSequences& seq, unsigned N_max)
{
    if (2 * N_max + 1 > seq.n_max())
        throw std::out_of_range("even_relation_rows: sequences too short for N_max");
    std::vector<EvenRelationRow> rows;
    rows.reserve(N_max + 1);
    for (unsigned N = 0; N <= N_max; ++N) {
        EvenRelationRow row;
        row.N = N;
        const BigRational m(2 * N + 1);
        const PiLinear odd = seq.i_diag(2 * N);
        const BigRational& squares = seq.a2_sum(2 * N);
        const PiLinear scaled = odd * (BigRational(2 * N + 2) / m);
        row.printed = scaled - PiLinear::rational(squares / m);
        row.halved = scaled - PiLinear::rational(squares / (BigRational(2) * m));
        row.closed = seq.i_diag(2 * N + 1);
        row.printed_matches = row.printed == row.closed;
        row.halved_matches = row.halved == row.closed;
        rows.push_back(std::move(row));
    }
    return rows;
}

// ---- tallies ----------------------------------------------------------------

CheckTally check_a_forms(unsigned n_max)
{
    CheckTally t;
    t.name = "a_n binomial vs recurrence";
    BigRational a(1);
    for (unsigned n = 0; n <= n_max; ++n) {
        if (n >= 2 && n % 2 == 0)
            a *= BigRational(BigInt(n - 1), BigInt(n));
        t.record(n, a_seq(n) == (n % 2 == 0 ? a : BigRational(0)));
    }
    return t;
}

CheckTally check_b_forms(unsigned n_max)
{
    CheckTally t;
    t.name = "b_n recurrence vs explicit sum";
    BigRational a(1), b(1);
    for (unsigned n = 0; n <= n_max; n += 2) {
        if (n >= 2) {
            a *= BigRational(BigInt(n - 1), BigInt(n));
            b = BigRational(BigInt(n), BigInt(n + 1)) * b + a / BigRational(n + 1);
        }
        t.record(n, matches_b_explicit(n, b));
    }
    return t;
}

CheckTally check_g_forms(unsigned n_max)
{
    CheckTally t;
    t.name = "G_n explicit vs recurrence";
    const auto rec = g_poly_recurrence(n_max);
    for (unsigned n = 0; n <= n_max; ++n)
        t.record(n, rec[n] == g_poly(n));
    return t;
}

CheckTally check_ab_step(unsigned n_max)
{
    CheckTally t;
    t.name = "(n+2)a_{n+2}b_n - n a_n b_{n-2} = a_n^2";
    BigRational a(1), b(1), b_prev(0);
    for (unsigned n = 0; n <= n_max; n += 2) {
        const BigRational a_next = a * BigRational(BigInt(n + 1), BigInt(n + 2));
        const BigRational lhs = BigRational(n + 2) * a_next * b - BigRational(n) * a * b_prev;
        t.record(n, lhs == a * a);
        b_prev = b;
        b = BigRational(BigInt(n + 2), BigInt(n + 3)) * b + a_next / BigRational(n + 3);
        a = a_next;
    }
    return t;
}

CheckTally check_square_sum_identity(unsigned k_max)
{
    CheckTally t;
    t.name = "sum a_{2j}^2 = (2k+1) a_{2k} b_{2k}";
    BigRational a(1), b(1), sum(1);
    for (unsigned k = 0; k <= k_max; ++k) {
        if (k > 0) {
            const unsigned m = 2 * k;
            a *= BigRational(BigInt(m - 1), BigInt(m));
            b = BigRational(BigInt(m), BigInt(m + 1)) * b + a / BigRational(m + 1);
            sum += a * a;
        }
        t.record(k, sum == BigRational(2 * k + 1) * a * b);
    }
    return t;
}

CheckTally check_by_parts(unsigned N_max)
{
    CheckTally t;
    t.name = "summation-by-parts form vs telescoped closed form";
    const LensSequences seq(2 * N_max);
    const auto odd = seq.i_odd_by_parts_all();
    for (unsigned N = 0; N <= N_max; ++N)
        t.record(N, odd[N] == seq.i_diag(2 * N));
    return t;
}

// ---- audited float mode ----------------------------------------------------

namespace {

class Auditor
{
public:
    Auditor() : u_(epsilon<Real>()) {}

    AuditedReal exact(long v) const { return {Real(v), Real(0)}; }
    AuditedReal constant(const Real& v) const { return {v, abs(v) * u_}; }

    AuditedReal add(const AuditedReal& x, const AuditedReal& y) const
    {
        Real v = x.value + y.value;
        return {v, x.error_bound + y.error_bound + abs(v) * u_};
    }
    AuditedReal sub(const AuditedReal& x, const AuditedReal& y) const
    {
        Real v = x.value - y.value;
        return {v, x.error_bound + y.error_bound + abs(v) * u_};
    }
    AuditedReal mul(const AuditedReal& x, const AuditedReal& y) const
    {
        Real v = x.value * y.value;
        return {v, abs(x.value) * y.error_bound + abs(y.value) * x.error_bound + x.error_bound * y.error_bound +
                       abs(v) * u_};
    }
    AuditedReal mul_int(const AuditedReal& x, long k) const
    {
        Real v = x.value * k;
        return {v, x.error_bound * std::labs(k) + abs(v) * u_};
    }
    AuditedReal div_int(const AuditedReal& x, long k) const
    {
        Real v = x.value / k;
        return {v, x.error_bound / std::labs(k) + abs(v) * u_};
    }

private:
    Real u_;
};

} // namespace

std::vector<AuditedReal> i_diag_float(unsigned n_max, unsigned precision_bits)
{
    ScopedPrecision scope(precision_bits);
    const Auditor au;
    const AuditedReal quarter_pi = au.div_int(au.constant(pi<Real>()), 4);

    std::vector<AuditedReal> out;
    out.reserve(n_max + 1);
    AuditedReal a = au.exact(1), b = au.exact(1);
    AuditedReal ab_sum = au.exact(0), a2_sum = au.exact(1);
    // Loop invariant at step n: a, b hold a_k, b_k for the largest even k <= n,
    // ab_sum = sum_{k<n} a_k b_k/(k+2), a2_sum = sum_{k<=n} a_k^2.
    for (unsigned n = 0; n <= n_max; ++n) {
        if (n >= 1) {
            const unsigned k = n - 1;
            if (k % 2 == 0)
                ab_sum = au.add(ab_sum, au.div_int(au.mul(a, b), k + 2));
            if (n % 2 == 0) {
                a = au.div_int(au.mul_int(a, n - 1), n);
                b = au.div_int(au.add(au.mul_int(b, n), a), n + 1);
                a2_sum = au.add(a2_sum, au.mul(a, a));
            }
        }
        const AuditedReal bracket = au.mul_int(au.sub(quarter_pi, ab_sum), n + 1);
        AuditedReal value = au.sub(bracket, au.div_int(a2_sum, 2));
        // The error arithmetic itself is rounded; widen by a relative 2^-32.
        value.error_bound += ldexp(value.error_bound, -32);
        out.push_back(std::move(value));
    }
    return out;
}

} // namespace faberlab::lens
