#pragma once

// Exact-arithmetic sequences and closed forms for the two-circular-arc lens
// whose exterior map is the Zhoukowsky function phi(z) = (z + 1/z)/2.
//
// Conventions used throughout:
//   a_n = F_n(0)
//   b_n = int_{-1}^{1} G_{n+1}(x)/x dx
//   G_n = F_n - F_n(0)
//   E_n(z) = phi^n(z) - F_n(z) = G_n(1/z)
//   I_{n,n} = ||E_n'||^2 over the exterior domain
// i_diag_closed(n) returns I_{n+1,n+1}.

#include "faberlab/big_rational.hpp"
#include "faberlab/pi_linear.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace faberlab::lens {

enum class Parity { even, odd };

inline Parity parity_of(long n) { return (n % 2 == 0) ? Parity::even : Parity::odd; }

/// Polynomial whose exponents all share one parity. Coefficient i is the
/// coefficient of z^(p + 2i), p in {0, 1}.
class LensPolynomial
{
public:
    LensPolynomial() = default;
    explicit LensPolynomial(Parity parity) : parity_(parity) {}

    Parity parity() const { return parity_; }
    bool is_zero() const;
    /// Largest exponent with a nonzero coefficient, -1 for the zero polynomial.
    int degree() const;

    /// Zero for exponents of the wrong parity or outside the stored range.
    BigRational coeff(int exponent) const;
    /// Throws std::invalid_argument if the exponent has the wrong parity or is negative.
    void set(int exponent, BigRational value);

    std::map<int, BigRational> terms() const;
    std::size_t stored_size() const { return coeffs_.size(); }

    friend bool operator==(const LensPolynomial& a, const LensPolynomial& b);

private:
    int base() const { return parity_ == Parity::even ? 0 : 1; }

    Parity parity_ = Parity::even;
    std::vector<BigRational> coeffs_;
};

// ---- sequences ------------------------------------------------------------

/// a_n from the binomial formula: 2^-n C(n, n/2) for even n, 0 for odd n.
BigRational a_seq(unsigned n);
/// a_n from a_0 = 1, a_n = (n-1)/n a_{n-2}.
BigRational a_seq_recurrence(unsigned n);

/// b_n from b_0 = 1, b_n = n/(n+1) b_{n-2} + a_n/(n+1).
BigRational b_seq(unsigned n);
/// b_n = 2^-n sum_{j<=n/2} C(n+1, j)/(n+1-2j), evaluated by binary splitting.
BigRational b_seq_explicit(unsigned n);
/// True iff `value` equals the explicit sum for b_n. Compares by cross
/// multiplication so no big gcd is needed.
bool matches_b_explicit(unsigned n, const BigRational& value);

/// G_n from the explicit binomial sum.
LensPolynomial g_poly(unsigned n);
/// G_0 .. G_{n_max} from G_{n+1} = phi G_n + z a_n/2 - a_{n+1}/2.
std::vector<LensPolynomial> g_poly_recurrence(unsigned n_max);

/// sum_{j<=k} a_{2j}^2 == (2k+1) a_{2k} b_{2k}, exactly.
bool square_sum_identity_check(unsigned k);

/// I_{n+1,n+1} from the telescoped closed form.
PiLinear i_diag_closed(unsigned n);
/// I_{2N+1,2N+1} from the summation-by-parts form (times 2N+1).
PiLinear i_odd_by_parts(unsigned N);

/// ||E'_{n+1}||^2 / (pi (n+1)), the lower bound on alpha_n.
TaggedFloat lens_alpha_lower_bound(unsigned n, unsigned precision_bits = kDefaultPrecisionBits);

/// a_n, b_n and their running sums for n = 0..n_max, computed once in index
/// order. Everything is exact and immutable after construction.
class LensSequences
{
public:
    explicit LensSequences(unsigned n_max);

    unsigned n_max() const { return n_max_; }
    const BigRational& a(unsigned n) const { return a_.at(n); }
    const BigRational& b(unsigned n) const { return b_.at(n); }

    /// sum_{k=0}^{n-1} a_k b_k / (k+2)
    const BigRational& ab_sum(unsigned n) const { return ab_sum_.at(n); }
    /// sum_{k=0}^{n} a_k^2
    const BigRational& a2_sum(unsigned n) const { return a2_sum_.at(n); }

    /// I_{n+1,n+1}; requires n <= n_max.
    PiLinear i_diag(unsigned n) const;
    /// All I_{n+1,n+1} for n = 0..n_max.
    std::vector<PiLinear> i_diag_all() const;
    /// I_{2N+1,2N+1} through the summation-by-parts form; requires 2N <= n_max.
    std::vector<PiLinear> i_odd_by_parts_all() const;

private:
    unsigned n_max_;
    std::vector<BigRational> a_, b_, ab_sum_, a2_sum_;
};

// ---- the even-index relation ---------------------------------------------

/// I_{2N+2,2N+2} predicted from I_{2N+1,2N+1} by
///   (2N+2)/(2N+1) I_{2N+1,2N+1} - s * sum_{j<=N} a_{2j}^2 / (2N+1)
/// with s = 1 (as printed) or s = 1/2 (the form consistent with the closed form).
struct EvenRelationRow
{
    unsigned N = 0;
    PiLinear printed;
    PiLinear halved;
    PiLinear closed;
    bool printed_matches = false;
    bool halved_matches = false;
};

std::vector<EvenRelationRow> even_relation_rows(const LensSequences& seq, unsigned N_max);

// ---- bulk identity tallies ------------------------------------------------

struct CheckTally
{
    std::string name;
    unsigned checked = 0;
    unsigned passed = 0;
    std::optional<unsigned> first_failure;

    bool ok() const { return checked == passed; }
    void record(unsigned index, bool pass)
    {
        ++checked;
        if (pass)
            ++passed;
        else if (!first_failure)
            first_failure = index;
    }
};

/// binomial a_n vs recurrence a_n, n = 0..n_max
CheckTally check_a_forms(unsigned n_max);
/// recurrence b_n vs explicit sum, even n = 0..n_max
CheckTally check_b_forms(unsigned n_max);
/// explicit G_n vs recurrence G_n, n = 0..n_max
CheckTally check_g_forms(unsigned n_max);
/// (n+2) a_{n+2} b_n - n a_n b_{n-2} == a_n^2, even n = 0..n_max
CheckTally check_ab_step(unsigned n_max);
/// square_sum_identity_check, k = 0..k_max
CheckTally check_square_sum_identity(unsigned k_max);
/// i_odd_by_parts(N) == i_diag_closed(2N), N = 0..N_max
CheckTally check_by_parts(unsigned N_max);

// ---- audited float mode ---------------------------------------------------

/// Floating value with an accumulated absolute error bound.
struct AuditedReal
{
    Real value;
    Real error_bound;
};

/// I_{n+1,n+1} for n = 0..n_max evaluated in MPFR at the given precision, for
/// ranges where the exact rationals get unwieldy. Each entry carries a
/// rigorous first-order bound on its rounding error.
std::vector<AuditedReal> i_diag_float(unsigned n_max, unsigned precision_bits = kDefaultPrecisionBits);

} // namespace faberlab::lens
