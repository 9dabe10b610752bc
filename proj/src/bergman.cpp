#include "faberlab/bergman.hpp"

namespace faberlab {

namespace {

AlphaRun attempt(const BoundaryPath& path, const ExteriorMap& map, unsigned N, const AlphaOptions& options,
                 unsigned bits)
{
    ScopedPrecision scope(bits);
    const OrthoBasis<Real> basis = build_basis<Real>(path, N, bits, options.tol);
    AlphaRun run;
    run.precision_bits = bits;
    run.gram_residual = basis.gram_residual;
    run.moment_error = basis.moment_error;
    run.rows = alpha_table<Real>(basis, map.gamma().to_real());

    const bool exact = map == lens_map() && path == lens_boundary();
    for (AlphaRow<Real>& row : run.rows) {
        // bits cancelled in 1 - ratio, on top of those lost building p_n
        const Real ratio = Real(1) - row.alpha;
        // alpha below its own error is indistinguishable from zero (the disk)
        if (abs(row.alpha) > row.alpha_error) {
            const double cancel = to_double(log2(abs(ratio / row.alpha)));
            if (cancel + basis.bits_lost[row.n] > bits / 2.0)
                throw PrecisionInsufficient("alpha_" + std::to_string(row.n) + " cancellation exceeds half the bits",
                                            row.n);
        }
        try {
            row.lower_bound = exterior_term<Real>(map, path, row.n, options.tol, exact);
        } catch (const QuadratureError&) {
            // no pointwise phi on this boundary: the bound stays empty
        }
        if (options.decomposition_max && row.n <= *options.decomposition_max && row.lower_bound)
            row.decomposition_residual =
                check_decomposition<Real>(basis, map, row.n, options.tol, row.lower_bound).residual;
    }
    return run;
}

} // namespace

AlphaRun run_alpha(const BoundaryPath& path, const ExteriorMap& map, unsigned N, const AlphaOptions& options)
{
    unsigned attempts = 0;
    for (unsigned bits = options.precision_bits;; bits *= 2) {
        ++attempts;
        try {
            AlphaRun run = attempt(path, map, N, options, bits);
            run.attempts = attempts;
            return run;
        } catch (const IllConditioned&) {
            if (bits * 2 > options.max_precision_bits)
                throw;
        } catch (const PrecisionInsufficient&) {
            if (bits * 2 > options.max_precision_bits)
                throw;
        }
    }
}

} // namespace faberlab
