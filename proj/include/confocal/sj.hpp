#pragma once

#include <Eigen/Dense>

#include <complex>
#include <vector>

#include "confocal/errors.hpp"
#include "confocal/rng.hpp"

namespace confocal::sj {

using Cplx = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

/// One symmetric Jordan block a I_p + J_p.
struct SJBlock {
    Cplx eigenvalue;
    int size = 1;
};

/// Block list of symmetric-Jordan data; realized as a dense complex symmetric
/// matrix (desk scale, dimension <= 8).
struct SJMatrix {
    std::vector<SJBlock> blocks;

    int dimension() const;
    CMat realize() const;
};

/// The nilpotent symmetric Jordan block J_p built on the isotropic vectors
/// f_j = (e_{2j-1} + i e_{2j})/sqrt(2); J_p^p = 0, J_p^{p-1} != 0.
CMat sj_nilpotent(int p);

/// f_j within dimension dim (1-based j).
CVec isotropic_f(int j, int dim);

/// sqrt(I - z M) per block by the truncated binomial series (exact, J_p
/// nilpotent); principal square-root branch. Throws BranchPoleError when
/// 1 - z a vanishes for a block.
CMat sqrt_sj(const SJMatrix& M, Cplx z);

enum class QuadricKind { QC, QWC, IQWC };

/// Canonical confocal family data (A, B, C) of one of the three kinds.
struct CanonicalQuadric {
    SJMatrix A_blocks;
    QuadricKind kind = QuadricKind::QC;
    CMat A;
    CVec B;
    Cplx C;

    int dim() const { return int(A.rows()); }

    /// Validates the kind constraints (invertibility / kernel structure).
    static CanonicalQuadric make(SJMatrix blocks, QuadricKind kind);
};

Cplx eval_Q0(const CanonicalQuadric& q, const CVec& x);
Cplx eval_Qz(const CanonicalQuadric& q, Cplx z, const CVec& x);

/// Normal direction R_z^{-1}(A x + B) of Q_z at x.
CVec normal_hat_z(const CanonicalQuadric& q, Cplx z, const CVec& x);

/// Ivory translation term C(z); polynomial of degree p in z for IQWC.
CVec c_of_z(const CanonicalQuadric& q, Cplx z);

/// x_z = sqrt(R_z) x0 + C(z); requires Q0(x0) = 0 within tol.
CVec ivory_map(const CanonicalQuadric& q, Cplx z, const CVec& x0, double tol = 1e-8);

/// Inverse of ivory_map (the z -> 0 translation of the re-indexed family).
CVec ivory_back(const CanonicalQuadric& q, Cplx z, const CVec& xz);

enum class Identity {
    ivory,          // |V_0^1|^2 = |V_1^0|^2
    henrici,        // |sqrt(R_z) w|^2 = |w|^2 for rulings
    tc_symmetry,    // (V_0^1)^T N0^0 = (V_1^0)^T N0^1
    segment_ruling, // (V_0^1)^T w + (V_1^0)^T sqrt(R_z) w = -z N0^T w
    ruling_ruling,  // w0^T sqrt(R_z) w1 symmetric
    polar_rulings,  // w^T A w_hat = 0 => (w_z)^T w_hat_z = w^T w_hat
    key_lemma,      // sqrt(R_z) V_1^0 = -V_0^1 - z N0^0
};

/// Named points/rulings feeding an identity; only the fields an identity
/// needs are read.
struct IdentitySample {
    CVec x0_0, x0_1; // points on Q0
    CVec w0_0, w0_1; // ruling directions at x0_0 / x0_1
    CVec w0_hat;     // A-conjugate ruling partner at x0_0 (polar_rulings)
};

/// Scaled residual |LHS - RHS| / max(1, |LHS|, |RHS|) of the named identity.
/// Hypotheses (membership, ruling conditions) are checked within hyp_tol.
double check_identity(Identity id, const CanonicalQuadric& q, Cplx z,
                      const IdentitySample& sample, double hyp_tol = 1e-6);

struct VertexReport {
    bool reflect_at_xz0 = false;
    bool reflect_at_x00 = false;
    bool collinear = false;
    double reflect_residual_xz0 = 0.0;
    double reflect_residual_x00 = 0.0;
    double collinearity_residual = 0.0;
    double discriminant_symmetry_residual = 0.0;
};

/// The Prop-6.1 vertex configuration report for three points on Q0 and the
/// Ivory images on Q_z; the discriminant symmetry is evaluated at zprime.
VertexReport vertex_configuration(const CanonicalQuadric& q, Cplx z, const CVec& x0_0,
                                  const CVec& x0_1, const CVec& x0_2, Cplx zprime,
                                  double tol = 1e-8);

/// Tangency discriminant of the line through y (on Q0) with direction V
/// against Q_{z'} (the quantity of Prop 6.1).
Cplx tangency_discriminant(const CanonicalQuadric& q, const CVec& y, const CVec& V,
                           Cplx zprime);

// -- deterministic random sampling (experiment/test support) --

/// Random SJMatrix: dimension <= max_dim, block sizes <= max_block; QC-safe
/// eigenvalues (bounded away from zero).
SJMatrix random_sj_matrix(SplitMix64& rng, int max_dim = 6, int max_block = 4);

/// Random complex z bounded away from the branch poles of M.
Cplx random_admissible_z(SplitMix64& rng, const SJMatrix& M);

/// Random point on Q0: free coordinates drawn uniformly, one coordinate
/// solved from the quadric equation.
CVec random_point_on(const CanonicalQuadric& q, SplitMix64& rng);

/// Random ruling direction at x0 (isotropic tangent direction for A);
/// requires dim >= 3. Normalized so that w^T conj(w) = 1.
CVec random_ruling_at(const CanonicalQuadric& q, const CVec& x0, SplitMix64& rng);

/// Ruling at x0 conjugate to w (w^T A w_hat = 0, w_hat != w); dim >= 4.
CVec random_conjugate_ruling(const CanonicalQuadric& q, const CVec& x0, const CVec& w,
                             SplitMix64& rng);

/// Basis of the tangent space {v : N^T v = 0} at a point with normal N.
CMat tangent_basis(const CVec& normal);

} // namespace confocal::sj
