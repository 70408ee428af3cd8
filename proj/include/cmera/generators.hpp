#pragma once
// One-particle momentum-space symbols of the spacetime symmetry generators of
// the regulated free boson: translations (H, P), boost (B), dilatation (D),
// special conformal (K1, K2), the scale part L of the flowed dilatation, and
// the entangler.  The module checks the commutator algebra on sampled test
// functions, the first-order constraint linking alpha and g (the condition
// under which the flowed dilatation equals scale part plus entangler), the
// covariant transformation of the regulated chiral fields (dimension and
// spin at symbol level), and the discrete spectrum of (H + K1)/2.
//
// Basis conventions.  A "mode basis" symbol acts on coefficient functions of
// the regulated annihilation modes; by construction of the state this symbol
// is the same with or without the cutoff (the Bogoliubov map is diagonal).
// The "field basis" form acts on coefficient pairs over (phi(k), pi(k)) and
// carries the profile alpha explicitly; symbol_conjugate produces it.

#include <array>
#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "cmera/profiles.hpp"

namespace cmera {

enum class generator_name { h, p, b, d, k1, k2, l, k_entangler };
enum class symbol_basis { mode, field };

using symbol_coeff = std::function<std::complex<double>(double)>;

// A symbol is a differential operator in k of order <= 2.  In the mode basis
// it is scalar: coeff[n](k) multiplies the n-th k-derivative of the mode
// coefficient function.  In the field basis (produced by symbol_conjugate) it
// is a 2x2 block acting on the (phi, pi) coefficient pair: block[r][c][n](k)
// is the order-n coefficient coupling row channel r to column channel c
// (channel 0 = phi, 1 = pi).
struct generator_symbol {
    generator_name name = generator_name::h;
    int order = 0;             // differential order in k: 0, 1, or 2
    bool sign_structure = false;  // carries sgn(k) or |k| factors
    bool anomalous = false;    // pure pair-creation channel (entangler only):
                               // no action on one-particle wavefunctions
    symbol_basis basis = symbol_basis::mode;
    std::optional<constraint_profile> cutoff;  // present: regulated version,
                                               // acting on the cutoff modes
    std::array<symbol_coeff, 3> coeff{};
    std::array<std::array<std::array<symbol_coeff, 3>, 2>, 2> block{};
};

// Mode-basis symbols:
//   H : |k|            P : k
//   B : i sgn(k) (k d/dk + 1/2)      D : i (k d/dk + 1/2)
//   K1: -sgn(k) (k d^2/dk^2 + d/dk - 1/(4k))
//   K2: -(k d^2/dk^2 + d/dk - 1/(4k))
//   L : i (k d/dk + 1/2)   (scale part; its pair-creation piece is cancelled
//                           by the entangler exactly when the constraint ODE
//                           holds -- see dlambda_covariance_residual)
//   K_entangler: coeff[0] = g(k), the coefficient of the pair-creation
//                channel; anomalous, so it has no one-particle action.
// The overload with a profile attaches the cutoff; the acting coefficients
// are identical (for the entangler, g picks up the profile's Lambda and, for
// a sharp profile, the step variant).
generator_symbol make_symbol(generator_name name);
generator_symbol make_symbol(generator_name name,
                             const constraint_profile& cutoff);

// Smooth function sampled on two Chebyshev patches [-k_max, -k_min] and
// [k_min, k_max] (points nodes each, ascending k overall), supported away
// from k = 0 where sgn(k) and 1/(4k) are singular.  make_test_function
// normalizes to max |f| = 1; operator outputs keep their natural scale.
struct test_function {
    double k_min = 0.0;
    double k_max = 0.0;
    int points = 0;  // Chebyshev-Lobatto nodes per patch
    std::vector<double> k;
    std::vector<std::complex<double>> f;
};

test_function make_test_function(
    const std::function<std::complex<double>(double)>& fn, double k_min,
    double k_max, int points = 97);

// a*f + b*g on a shared grid (no renormalization).
test_function lin_comb(std::complex<double> a, const test_function& f,
                       std::complex<double> b, const test_function& g);

// Applies the symbol by Chebyshev spectral differentiation per patch.
// Throws std::domain_error for anomalous or field-basis symbols and when f
// fails to vanish near the patch edges (support violation).
test_function apply_symbol(const generator_symbol& g, const test_function& f);

struct symbol_term {
    std::complex<double> weight;
    generator_symbol symbol;
};

// max |([g1,g2] - sum_i w_i E_i) f| / max |(sum_i w_i E_i) f|; absolute
// max-norm when the expected combination is empty (commutator should vanish).
// Throws numerics_error when f is under-resolved on its patches (Chebyshev
// tail above threshold), with a message suggesting a finer grid.
double commutator_residual(const generator_symbol& g1,
                           const generator_symbol& g2,
                           const std::vector<symbol_term>& expected,
                           const test_function& f);

struct commutation_check {
    std::string relation;
    double residual;
};

// The six relations of the global algebra on one test function:
// [H,P] = 0, [B,D] = 0, [B,H] = iP, [B,P] = iH, [D,H] = iH, [D,P] = iP.
std::vector<commutation_check> verify_commutation_relations(
    const test_function& f);

// Max over the grid of |k alpha'(k) / (2 alpha(k)) - g(k)|: the coefficient
// obstructing the identity "flowed dilatation = scale part + entangler".
// Zero certifies the identity at symbol level; a mismatched (alpha, g) pair
// is detected with a residual of order 1/2.  alpha' comes from the closed
// form for the analytic profile, from the piecewise form for the sharp one
// (the grid must exclude |k| = Lambda, where it is undefined), and from
// Richardson differences for sampled profiles.
double dlambda_covariance_residual(const constraint_profile& profile,
                                   const entangler_profile& entangler,
                                   const std::vector<double>& k_grid);

enum class scaling_operator { dphi, dbar_phi };
enum class scaling_generator { dilation, boost };

struct scaling_check {
    double eigenvalue;  // dimension (dilation) or spin (boost)
    double residual;    // relative max-norm deviation from the eigenrelation
};

// Represents the regulated chiral field at the origin by its coefficient
// pair over (phi(k), pi(k)), applies the adjoint action of the dilatation or
// boost at symbol level, and extracts the proportionality constant by least
// squares.  Expected: dimension 1 for both fields; spin +1 (right-mover)
// and -1 (left-mover).
scaling_check scaling_covariance_check(scaling_operator op,
                                       scaling_generator which,
                                       const constraint_profile& profile);

// Lowest n_levels eigenvalues of (H + K1)/2 restricted to k > 0, discretized
// symmetrically on a logarithmic grid (Dirichlet truncation).  Convergence
// is certified internally by enlarging the domain and refining the grid; a
// certification failure throws numerics_error.  The mode-basis symbol does
// not involve the profile, so the result is cutoff-independent; expected to
// approach 1, 2, 3, ...
std::vector<double> ns_spectrum(const constraint_profile& profile,
                                int n_levels);

// Field-basis form of a mode-basis symbol: conjugates the bilinear through
// the diagonal map phi(k) -> sqrt(alpha/2) channel, pi(k) -> 1/sqrt(2 alpha)
// channel, i.e. block[r][c] = roww_r(k) o symbol o colw_c(k) with
//   colw_phi = roww_phi = sqrt(alpha/2),  colw_pi = i/sqrt(2 alpha),
//   roww_pi = -i/sqrt(2 alpha),
// derivatives acting through the column weight.  Throws std::domain_error
// for the anomalous entangler and for symbols already in the field basis.
generator_symbol symbol_conjugate(const generator_symbol& g,
                                  const constraint_profile& profile);

}  // namespace cmera
