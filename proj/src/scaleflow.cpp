#include "cmera/scaleflow.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace cmera {

namespace {

struct grid_layout {
    std::size_t points;
    std::ptrdiff_t cutoff_index;
};

grid_layout check_grid(const flow_grid& grid) {
    if (!(grid.du > 0.0) || !std::isfinite(grid.du))
        throw std::invalid_argument("flow_grid: du must be positive");
    if (!(grid.u_min < 0.0) || !(grid.u_max > 0.0))
        throw std::invalid_argument(
            "flow_grid: need u_min < 0 < u_max so the cutoff is interior");
    const double span = (grid.u_max - grid.u_min) / grid.du;
    const double below = -grid.u_min / grid.du;
    const auto n_span = static_cast<std::ptrdiff_t>(std::llround(span));
    const auto n_below = static_cast<std::ptrdiff_t>(std::llround(below));
    if (std::abs(span - double(n_span)) > 1e-6 ||
        std::abs(below - double(n_below)) > 1e-6)
        throw std::invalid_argument(
            "flow_grid: u_min and u_max must be integer multiples of du");
    if (n_span + 1 > 20'000'000)
        throw std::invalid_argument("flow_grid: more than 2e7 samples");
    return {static_cast<std::size_t>(n_span) + 1, n_below};
}

void check_lambda(double lambda) {
    if (!(lambda > 0.0) || !std::isfinite(lambda))
        throw std::invalid_argument("flow: lambda must be positive");
}

// One step of one grid spacing: every sample moves down one slot; samples
// whose pre-step momentum is at or below the cutoff pick up the factor
// e^{-du}.  The top slot refills from the constant extension (above the
// cutoff, hence unscaled).
void micro_step(flow_state& st, double factor) {
    const std::size_t n = st.beta.size();
    for (std::size_t j = 0; j + 1 < n; ++j) {
        const bool scaled =
            static_cast<std::ptrdiff_t>(j) + 1 <= st.cutoff_index;
        st.beta[j] = scaled ? st.beta[j + 1] * factor : st.beta[j + 1];
    }
}

}  // namespace

double flow_state::k(std::size_t i) const {
    return lambda *
           std::exp(double(static_cast<std::ptrdiff_t>(i) - cutoff_index) * du);
}

flow_state make_flow_state(double lambda, const flow_grid& grid) {
    check_lambda(lambda);
    const grid_layout lay = check_grid(grid);
    flow_state st;
    st.lambda = lambda;
    st.s = 0.0;
    st.du = grid.du;
    st.cutoff_index = lay.cutoff_index;
    st.beta.assign(lay.points, lambda);
    return st;
}

flow_state make_flow_state(const std::function<double(double)>& beta_of_k,
                           double lambda, const flow_grid& grid) {
    flow_state st = make_flow_state(lambda, grid);
    for (std::size_t i = 0; i < st.beta.size(); ++i) {
        const double b = beta_of_k(st.k(i));
        if (!std::isfinite(b) || !(b > 0.0))
            throw std::invalid_argument(
                "make_flow_state: profile must be finite and positive (k = " +
                std::to_string(st.k(i)) + ")");
        st.beta[i] = b;
    }
    return st;
}

flow_state flow_step(const flow_state& state, double eps) {
    if (!(eps >= 0.0) || !std::isfinite(eps))
        throw std::invalid_argument("flow_step: eps must be nonnegative");
    const double steps = eps / state.du;
    const auto m = static_cast<std::ptrdiff_t>(std::llround(steps));
    if (std::abs(steps - double(m)) > 1e-9)
        throw std::invalid_argument(
            "flow_step: eps must be an integer multiple of the grid spacing " +
            std::to_string(state.du));
    flow_state out = state;
    if (m == 0) return out;
    // Repeated elementary steps: composing two flow_step calls performs the
    // identical operation sequence as one call over the summed scale, so the
    // semigroup property holds bitwise on the samples.
    const double factor = std::exp(-state.du);
    for (std::ptrdiff_t t = 0; t < m; ++t) micro_step(out, factor);
    out.s = state.s - eps;
    return out;
}

flow_state flow_profile(double s_ir, double lambda, const flow_grid& grid) {
    if (!(s_ir <= 0.0))
        throw std::invalid_argument("flow_profile: s_ir must be nonpositive");
    flow_state st = make_flow_state(lambda, grid);
    const double plateau = lambda * std::exp(s_ir);
    for (std::size_t i = 0; i < st.beta.size(); ++i)
        st.beta[i] = std::max(std::min(st.k(i), lambda), plateau);
    st.s = s_ir;
    return st;
}

double fixed_point_residual(double lambda, const flow_grid& grid) {
    const flow_state sharp = make_flow_state(
        [lambda](double k) { return std::min(k, lambda); }, lambda, grid);
    const flow_state stepped = flow_step(sharp, grid.du);
    double worst = 0.0;
    for (std::size_t i = 0; i < sharp.beta.size(); ++i)
        worst = std::max(worst, std::abs(stepped.beta[i] - sharp.beta[i]));
    return worst;
}

}  // namespace cmera
