// Scale evolution of linear constraints under the sharp-cutoff combination
// of rescaling and entangling.  A Gaussian state is characterized mode by
// mode by a pair (k, beta): the annihilation condition with constraint value
// beta at momentum k.  One evolution step of length eps relabels k -> k e^{-eps}
// and rescales beta -> beta e^{-eps} for modes at or below the cutoff, leaving
// super-cutoff modes untouched (the regime test uses the pre-step momentum).
// Iterating from the product state beta == Lambda sweeps out a three-regime
// profile -- plateau Lambda e^{s} below scale, the line |k| in between,
// Lambda above cutoff -- and converges onto the sharp fixed-point profile
// min(|k|, Lambda).
//
// Profiles live on a fixed logarithmic momentum grid and steps are restricted
// to integer multiples of the grid spacing, so the relabeling is an exact
// index shift: no interpolation, and composing steps is bitwise identical to
// taking one combined step.  The cutoff sits exactly on a grid point and the
// regime test compares grid indices, so no step straddles the boundary.
//
// Because the sharp-cutoff entangler underlying this map is not quasi-local,
// the module is diagnostic: it exhibits the fixed-point structure of the
// constraint flow, while the quasi-local smooth profile is handled in closed
// form elsewhere.  States are immutable snapshots; stepping returns a new
// state, so distinct trajectories can be evolved concurrently.
#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace cmera {

// Logarithmic grid u = log(k / lambda) on [u_min, u_max].  u_min < 0 < u_max
// and both endpoints must be integer multiples of du, so that the cutoff
// u = 0 falls on a grid point.
struct flow_grid {
    double u_min = -32.0;
    double u_max = 2.0;
    double du = 1e-3;
};

// Sampled constraint profile at accumulated scale s <= 0.  The profile is a
// function of |k| (even by construction); samples cover k > 0 only.  Above
// the grid top -- which lies above the cutoff -- the profile is extended by
// its last sample, exact for every profile that equals lambda there.
struct flow_state {
    double lambda = 1.0;
    double s = 0.0;
    double du = 1e-3;
    std::ptrdiff_t cutoff_index = 0;  // grid index with k == lambda
    std::vector<double> beta;

    std::size_t size() const { return beta.size(); }
    // momentum of sample i, computed relative to the cutoff point so that
    // k(cutoff_index) == lambda exactly
    double k(std::size_t i) const;
};

// Product state beta == lambda at s = 0.
flow_state make_flow_state(double lambda = 1.0, const flow_grid& grid = {});

// Samples an arbitrary positive profile beta(k) at s = 0.
flow_state make_flow_state(const std::function<double(double)>& beta_of_k,
                           double lambda, const flow_grid& grid = {});

// Applies the piecewise map over scale eps >= 0, an integer multiple of the
// grid spacing (eps = 0 is the identity).  Throws std::invalid_argument for
// negative or misaligned eps.
flow_state flow_step(const flow_state& state, double eps);

// Closed-form profile after flowing the product state to scale s_ir <= 0:
// beta(k) = max(min(|k|, lambda), lambda e^{s_ir}).  Iterating flow_step
// from make_flow_state(lambda, grid) reaches the same state.
flow_state flow_profile(double s_ir, double lambda = 1.0,
                        const flow_grid& grid = {});

// Max absolute profile change, at fixed grid momentum, of the sharp
// fixed-point profile min(|k|, lambda) under one elementary step.  Zero up
// to round-off: the profile is stationary.
double fixed_point_residual(double lambda = 1.0, const flow_grid& grid = {});

}  // namespace cmera
