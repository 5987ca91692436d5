#include "confocal/sj.hpp"

#include <cmath>
#include <sstream>

namespace confocal::sj {

int SJMatrix::dimension() const {
    int d = 0;
    for (const auto& b : blocks) d += b.size;
    return d;
}

CVec isotropic_f(int j, int dim) {
    CVec f = CVec::Zero(dim);
    f(2 * j - 2) = Cplx(1.0 / std::sqrt(2.0), 0.0);
    f(2 * j - 1) = Cplx(0.0, 1.0 / std::sqrt(2.0));
    return f;
}

CMat sj_nilpotent(int p) {
    if (p < 1) throw Error("sj_nilpotent: p >= 1 required");
    CMat J = CMat::Zero(p, p);
    if (p == 1) return J;
    const int m = p / 2;
    auto f = [&](int j) { return isotropic_f(j, p); };
    auto fbar = [&](int j) { return CVec(isotropic_f(j, p).conjugate()); };
    if (p % 2 == 0) {
        for (int j = 1; j < m; ++j)
            J += f(j) * fbar(j + 1).transpose() + fbar(j + 1) * f(j).transpose();
        J += f(m) * f(m).transpose();
    } else {
        CVec e_p = CVec::Zero(p);
        e_p(p - 1) = 1.0;
        for (int j = 1; j < m; ++j)
            J += f(j) * fbar(j + 1).transpose() + fbar(j + 1) * f(j).transpose();
        J += f(m) * e_p.transpose() + e_p * f(m).transpose();
    }
    return J;
}

CMat SJMatrix::realize() const {
    const int d = dimension();
    CMat M = CMat::Zero(d, d);
    int off = 0;
    for (const auto& b : blocks) {
        M.block(off, off, b.size, b.size) =
            b.eigenvalue * CMat::Identity(b.size, b.size) + sj_nilpotent(b.size);
        off += b.size;
    }
    return M;
}

static double binom_half(int j) {
    // binom(1/2, j)
    double v = 1.0;
    for (int k = 1; k <= j; ++k) v *= (0.5 - (k - 1)) / k;
    return v;
}

static double binom_minus_half(int j) {
    double v = 1.0;
    for (int k = 1; k <= j; ++k) v *= (-0.5 - (k - 1)) / k;
    return v;
}

CMat sqrt_sj(const SJMatrix& M, Cplx z) {
    const int d = M.dimension();
    CMat S = CMat::Zero(d, d);
    int off = 0;
    for (const auto& b : M.blocks) {
        const Cplx alpha = 1.0 - z * b.eigenvalue;
        if (std::abs(alpha) < 1e-12)
            throw BranchPoleError("sqrt_sj: 1 - z a vanishes for a block");
        const Cplx beta = -z;
        const CMat J = sj_nilpotent(b.size);
        CMat blk = std::sqrt(alpha) * CMat::Identity(b.size, b.size);
        CMat Jpow = CMat::Identity(b.size, b.size);
        Cplx fac = std::sqrt(alpha);
        for (int j = 1; j < b.size; ++j) {
            Jpow = CMat(Jpow * J);
            fac *= beta / alpha;
            blk += binom_half(j) * fac * Jpow;
        }
        S.block(off, off, b.size, b.size) = blk;
        off += b.size;
    }
    return S;
}

CanonicalQuadric CanonicalQuadric::make(SJMatrix blocks, QuadricKind kind) {
    CanonicalQuadric q;
    q.A_blocks = std::move(blocks);
    q.kind = kind;
    const int d = q.A_blocks.dimension();
    if (d > 8) throw Error("CanonicalQuadric: dimension > 8 not supported (dense realization)");
    q.A = q.A_blocks.realize();
    q.B = CVec::Zero(d);
    switch (kind) {
        case QuadricKind::QC:
            for (const auto& b : q.A_blocks.blocks)
                if (std::abs(b.eigenvalue) < 1e-12)
                    throw Error("QC: A must be invertible (no zero eigenvalue)");
            q.C = Cplx(-1.0, 0.0);
            break;
        case QuadricKind::QWC: {
            const auto& last = q.A_blocks.blocks.back();
            if (!(last.size == 1 && std::abs(last.eigenvalue) < 1e-14))
                throw Error("QWC: last block must be the 1x1 zero block (ker A = span e_{n+1})");
            for (std::size_t i = 0; i + 1 < q.A_blocks.blocks.size(); ++i)
                if (std::abs(q.A_blocks.blocks[i].eigenvalue) < 1e-12)
                    throw Error("QWC: only the last block may be singular");
            q.B = CVec::Zero(d);
            q.B(d - 1) = -1.0;
            q.C = 0.0;
            break;
        }
        case QuadricKind::IQWC: {
            const auto& first = q.A_blocks.blocks.front();
            if (!(first.size >= 2 && std::abs(first.eigenvalue) < 1e-14))
                throw Error("IQWC: first block must be nilpotent J_p with p >= 2 (ker A = span f_1)");
            for (std::size_t i = 1; i < q.A_blocks.blocks.size(); ++i)
                if (std::abs(q.A_blocks.blocks[i].eigenvalue) < 1e-12)
                    throw Error("IQWC: only the first block may be singular");
            q.B = -isotropic_f(1, d).conjugate();
            q.C = 0.0;
            break;
        }
    }
    return q;
}

Cplx eval_Q0(const CanonicalQuadric& q, const CVec& x) {
    return (x.transpose() * (q.A * x + 2.0 * q.B))(0) + q.C;
}

static CMat resolvent(const CanonicalQuadric& q, Cplx z) {
    const int d = q.dim();
    return CMat(CMat::Identity(d, d) - z * q.A);
}

Cplx eval_Qz(const CanonicalQuadric& q, Cplx z, const CVec& x) {
    const CMat Rz = resolvent(q, z);
    Eigen::PartialPivLU<CMat> lu(Rz);
    const CVec Rinv_x = lu.solve(x);
    const CVec Rinv_B = lu.solve(q.B);
    return (x.transpose() * (q.A * Rinv_x))(0) + 2.0 * (Rinv_B.transpose() * x)(0) + q.C +
           z * (q.B.transpose() * Rinv_B)(0);
}

CVec normal_hat_z(const CanonicalQuadric& q, Cplx z, const CVec& x) {
    const CMat Rz = resolvent(q, z);
    return Eigen::PartialPivLU<CMat>(Rz).solve(CVec(q.A * x + q.B));
}

CVec c_of_z(const CanonicalQuadric& q, Cplx z) {
    const int d = q.dim();
    switch (q.kind) {
        case QuadricKind::QC:
            return CVec::Zero(d);
        case QuadricKind::QWC: {
            CVec c = CVec::Zero(d);
            c(d - 1) = 0.5 * z;
            return c;
        }
        case QuadricKind::IQWC: {
            const int p = q.A_blocks.blocks.front().size;
            const CMat Jp = sj_nilpotent(p);
            CVec fbar1 = isotropic_f(1, p).conjugate();
            CVec acc = CVec::Zero(p);
            CVec Jk_f = fbar1;
            Cplx zpow = z;
            for (int k = 0; k < p; ++k) {
                const double gamma = binom_minus_half(k) * ((k % 2 == 0) ? 1.0 : -1.0) /
                                     (2.0 * (k + 1));
                acc += gamma * zpow * Jk_f;
                Jk_f = CVec(Jp * Jk_f);
                zpow *= z;
            }
            CVec c = CVec::Zero(d);
            c.head(p) = acc;
            return c;
        }
    }
    throw Error("c_of_z: bad kind");
}

CVec ivory_map(const CanonicalQuadric& q, Cplx z, const CVec& x0, double tol) {
    const Cplx q0 = eval_Q0(q, x0);
    const double scale = std::max(1.0, x0.norm() * x0.norm());
    if (std::abs(q0) > tol * scale) {
        std::ostringstream os;
        os << "ivory_map: |Q0(x0)| = " << std::abs(q0);
        throw OffQuadricError(os.str());
    }
    return CVec(sqrt_sj(q.A_blocks, z) * x0 + c_of_z(q, z));
}

CVec ivory_back(const CanonicalQuadric& q, Cplx z, const CVec& xz) {
    const CMat S = sqrt_sj(q.A_blocks, z);
    return Eigen::PartialPivLU<CMat>(S).solve(CVec(xz - c_of_z(q, z)));
}

namespace {

Cplx bilinear(const CVec& a, const CVec& b) { return (a.transpose() * b)(0); }

double scaled_abs(Cplx lhs, Cplx rhs) {
    return std::abs(lhs - rhs) / std::max({1.0, std::abs(lhs), std::abs(rhs)});
}

void require_on_quadric(const CanonicalQuadric& q, const CVec& x, double tol,
                        const char* who) {
    if (x.size() != q.dim()) throw HypothesisError(std::string(who) + ": missing point");
    const double s = std::max(1.0, x.squaredNorm());
    if (std::abs(eval_Q0(q, x)) > tol * s)
        throw HypothesisError(std::string(who) + ": point not on Q0");
}

void require_ruling(const CanonicalQuadric& q, const CVec& x, const CVec& w, double tol,
                    const char* who) {
    if (w.size() != q.dim()) throw HypothesisError(std::string(who) + ": missing ruling");
    const CVec n0 = q.A * x + q.B;
    const double sw = std::max(1.0, w.norm());
    if (std::abs(bilinear(w, CVec(q.A * w))) > tol * sw * sw)
        throw HypothesisError(std::string(who) + ": direction not isotropic for A");
    if (std::abs(bilinear(w, n0)) > tol * sw * std::max(1.0, n0.norm()))
        throw HypothesisError(std::string(who) + ": direction not tangent");
}

} // namespace

double check_identity(Identity id, const CanonicalQuadric& q, Cplx z,
                      const IdentitySample& s, double hyp_tol) {
    const CMat S = sqrt_sj(q.A_blocks, z);
    const CVec Cz = c_of_z(q, z);
    switch (id) {
        case Identity::ivory: {
            require_on_quadric(q, s.x0_0, hyp_tol, "ivory x0_0");
            require_on_quadric(q, s.x0_1, hyp_tol, "ivory x0_1");
            const CVec xz0 = S * s.x0_0 + Cz, xz1 = S * s.x0_1 + Cz;
            const CVec V01 = xz1 - s.x0_0, V10 = xz0 - s.x0_1;
            return scaled_abs(bilinear(V01, V01), bilinear(V10, V10));
        }
        case Identity::henrici: {
            require_on_quadric(q, s.x0_0, hyp_tol, "henrici x0_0");
            require_ruling(q, s.x0_0, s.w0_0, hyp_tol, "henrici");
            const CVec wz = S * s.w0_0;
            return scaled_abs(bilinear(wz, wz), bilinear(s.w0_0, s.w0_0));
        }
        case Identity::tc_symmetry: {
            require_on_quadric(q, s.x0_0, hyp_tol, "tc x0_0");
            require_on_quadric(q, s.x0_1, hyp_tol, "tc x0_1");
            const CVec xz0 = S * s.x0_0 + Cz, xz1 = S * s.x0_1 + Cz;
            const CVec V01 = xz1 - s.x0_0, V10 = xz0 - s.x0_1;
            const CVec n00 = q.A * s.x0_0 + q.B, n01 = q.A * s.x0_1 + q.B;
            return scaled_abs(bilinear(V01, n00), bilinear(V10, n01));
        }
        case Identity::segment_ruling: {
            require_on_quadric(q, s.x0_0, hyp_tol, "segment_ruling x0_0");
            require_on_quadric(q, s.x0_1, hyp_tol, "segment_ruling x0_1");
            require_ruling(q, s.x0_0, s.w0_0, hyp_tol, "segment_ruling");
            const CVec xz0 = S * s.x0_0 + Cz, xz1 = S * s.x0_1 + Cz;
            const CVec V01 = xz1 - s.x0_0, V10 = xz0 - s.x0_1;
            const CVec n00 = q.A * s.x0_0 + q.B;
            const Cplx lhs = bilinear(V01, s.w0_0) + bilinear(V10, CVec(S * s.w0_0));
            const Cplx rhs = -z * bilinear(n00, s.w0_0);
            return scaled_abs(lhs, rhs);
        }
        case Identity::ruling_ruling: {
            require_on_quadric(q, s.x0_0, hyp_tol, "ruling_ruling x0_0");
            require_on_quadric(q, s.x0_1, hyp_tol, "ruling_ruling x0_1");
            require_ruling(q, s.x0_0, s.w0_0, hyp_tol, "ruling_ruling w0_0");
            require_ruling(q, s.x0_1, s.w0_1, hyp_tol, "ruling_ruling w0_1");
            const Cplx lhs = bilinear(s.w0_0, CVec(S * s.w0_1));
            const Cplx rhs = bilinear(CVec(S * s.w0_0), s.w0_1);
            return scaled_abs(lhs, rhs);
        }
        case Identity::polar_rulings: {
            require_on_quadric(q, s.x0_0, hyp_tol, "polar x0_0");
            require_ruling(q, s.x0_0, s.w0_0, hyp_tol, "polar w0_0");
            require_ruling(q, s.x0_0, s.w0_hat, hyp_tol, "polar w0_hat");
            if (std::abs(bilinear(s.w0_0, CVec(q.A * s.w0_hat))) > hyp_tol)
                throw HypothesisError("polar_rulings: w^T A w_hat != 0");
            const CVec wz = S * s.w0_0, wzh = S * s.w0_hat;
            return scaled_abs(bilinear(wz, wzh), bilinear(s.w0_0, s.w0_hat));
        }
        case Identity::key_lemma: {
            require_on_quadric(q, s.x0_0, hyp_tol, "key_lemma x0_0");
            require_on_quadric(q, s.x0_1, hyp_tol, "key_lemma x0_1");
            const CVec xz0 = S * s.x0_0 + Cz, xz1 = S * s.x0_1 + Cz;
            const CVec V01 = xz1 - s.x0_0, V10 = xz0 - s.x0_1;
            const CVec n00 = q.A * s.x0_0 + q.B;
            const CVec lhs = S * V10;
            const CVec rhs = -V01 - z * n00;
            return (lhs - rhs).norm() / std::max({1.0, lhs.norm(), rhs.norm()});
        }
    }
    throw Error("check_identity: bad identity");
}

CMat tangent_basis(const CVec& normal) {
    CMat row(1, normal.size());
    row.row(0) = normal.transpose();
    Eigen::FullPivLU<CMat> lu(row);
    return lu.kernel();
}

namespace {

// reflection predicate residual: pairings of V1/|V1| +- V2/|V2| against a
// tangent basis at y, minimized over the complex-reflection sign
double reflect_residual(const CVec& normal, const CVec& V1, const CVec& V2) {
    const Cplx n1 = std::sqrt(bilinear(V1, V1));
    const Cplx n2 = std::sqrt(bilinear(V2, V2));
    if (std::abs(n1) < 1e-12 || std::abs(n2) < 1e-12)
        throw HypothesisError("reflection predicate: isotropic or zero segment");
    const CMat T = tangent_basis(normal);
    double best = 1e300;
    for (double sgn : {1.0, -1.0}) {
        const CVec u = V1 / n1 + sgn * (V2 / n2);
        double worst = 0.0;
        for (int c = 0; c < T.cols(); ++c) {
            const CVec tau = T.col(c) / T.col(c).norm();
            worst = std::max(worst, std::abs(bilinear(tau, u)));
        }
        best = std::min(best, worst);
    }
    return best;
}

} // namespace

Cplx tangency_discriminant(const CanonicalQuadric& q, const CVec& y, const CVec& V,
                           Cplx zprime) {
    const CMat Rp = CMat(CMat::Identity(q.dim(), q.dim()) - zprime * q.A);
    Eigen::PartialPivLU<CMat> lu(Rp);
    const CVec n = q.A * y + q.B;
    const CVec Rn = lu.solve(n);
    const CVec RV = lu.solve(V);
    const Cplx b = bilinear(V, Rn);
    const Cplx a = bilinear(V, CVec(q.A * RV));
    const Cplx c = bilinear(n, Rn);
    return b * b - zprime * a * c;
}

VertexReport vertex_configuration(const CanonicalQuadric& q, Cplx z, const CVec& x0_0,
                                  const CVec& x0_1, const CVec& x0_2, Cplx zprime,
                                  double tol) {
    if ((x0_0 - x0_1).norm() < 1e-12 && (x0_0 - x0_2).norm() < 1e-12)
        throw HypothesisError("vertex_configuration: points must be distinct");
    const CMat S = sqrt_sj(q.A_blocks, z);
    const CVec Cz = c_of_z(q, z);
    const CVec xz0 = S * x0_0 + Cz, xz1 = S * x0_1 + Cz, xz2 = S * x0_2 + Cz;

    VertexReport rep;
    const bool degenerate = (x0_1 - x0_2).norm() < 1e-12;

    // reflection of V_1^0, V_2^0 in x_z at x_z^0
    const CVec V10 = xz0 - x0_1, V20 = xz0 - x0_2;
    const CVec nz0 = normal_hat_z(q, z, xz0);
    rep.reflect_residual_xz0 = degenerate ? 0.0 : reflect_residual(nz0, V10, V20);
    rep.reflect_at_xz0 = rep.reflect_residual_xz0 < tol;

    // reflection of V_0^1, V_0^2 in x_0 at x_0^0
    const CVec V01 = xz1 - x0_0, V02 = xz2 - x0_0;
    const CVec n00 = q.A * x0_0 + q.B;
    rep.reflect_residual_x00 = degenerate ? 0.0 : reflect_residual(n00, V01, V02);
    rep.reflect_at_x00 = rep.reflect_residual_x00 < tol;

    // collinearity of x_z^1, x_0^0, x_z^2: all 2x2 minors of [d1 | d2]
    const CVec d1 = xz1 - x0_0, d2 = xz2 - x0_0;
    double worst = 0.0;
    const double scale = std::max(1.0, d1.norm() * d2.norm());
    for (int i = 0; i < q.dim(); ++i)
        for (int j = i + 1; j < q.dim(); ++j)
            worst = std::max(worst, std::abs(d1(i) * d2(j) - d1(j) * d2(i)));
    rep.collinearity_residual = worst / scale;
    rep.collinear = rep.collinearity_residual < tol;

    // symmetry of the Prop-6.1 discriminant in (x0_0, x0_1)
    const Cplx D_a = tangency_discriminant(q, x0_0, V01, zprime);
    const Cplx D_b = tangency_discriminant(q, x0_1, V10, zprime);
    rep.discriminant_symmetry_residual =
        std::abs(D_a - D_b) / std::max({1.0, std::abs(D_a), std::abs(D_b)});
    return rep;
}

SJMatrix random_sj_matrix(SplitMix64& rng, int max_dim, int max_block) {
    SJMatrix M;
    const int dim = 2 + int(rng.below(std::uint64_t(max_dim - 1))); // 2..max_dim
    int left = dim;
    while (left > 0) {
        const int cap = std::min(left, max_block);
        const int p = 1 + int(rng.below(std::uint64_t(cap)));
        // eigenvalues bounded away from 0 for QC invertibility
        const double r = rng.uniform(0.4, 2.0);
        const double th = rng.uniform(0.0, 2.0 * M_PI);
        M.blocks.push_back({Cplx(r * std::cos(th), r * std::sin(th)), p});
        left -= p;
    }
    return M;
}

Cplx random_admissible_z(SplitMix64& rng, const SJMatrix& M) {
    for (int attempt = 0; attempt < 256; ++attempt) {
        const Cplx z(rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5));
        bool ok = true;
        for (const auto& b : M.blocks)
            if (std::abs(1.0 - z * b.eigenvalue) < 0.05) ok = false;
        if (ok) return z;
    }
    throw Error("random_admissible_z: no admissible z found");
}

CVec random_point_on(const CanonicalQuadric& q, SplitMix64& rng) {
    const int d = q.dim();
    for (int attempt = 0; attempt < 256; ++attempt) {
        CVec x(d);
        for (int j = 0; j < d; ++j)
            x(j) = Cplx(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
        // solve for coordinate k with the largest quadratic coefficient
        int k = 0;
        for (int j = 1; j < d; ++j)
            if (std::abs(q.A(j, j)) > std::abs(q.A(k, k))) k = j;
        const Cplx alpha = q.A(k, k);
        Cplx beta = q.B(k);
        for (int j = 0; j < d; ++j)
            if (j != k) beta += q.A(k, j) * x(j);
        Cplx gamma = q.C;
        for (int i = 0; i < d; ++i) {
            if (i == k) continue;
            gamma += 2.0 * q.B(i) * x(i);
            for (int j = 0; j < d; ++j)
                if (j != k) gamma += q.A(i, j) * x(i) * x(j);
        }
        if (std::abs(alpha) > 1e-9) {
            const Cplx disc = beta * beta - alpha * gamma;
            const Cplx root = std::sqrt(disc);
            x(k) = ((rng.below(2) == 0) ? (-beta + root) : (-beta - root)) / alpha;
        } else if (std::abs(beta) > 1e-9) {
            x(k) = -gamma / (2.0 * beta);
        } else {
            continue;
        }
        if (std::abs(eval_Q0(q, x)) < 1e-9 * std::max(1.0, x.squaredNorm())) return x;
    }
    throw Error("random_point_on: sampling failed");
}

CVec random_conjugate_ruling(const CanonicalQuadric& q, const CVec& x0, const CVec& w,
                             SplitMix64& rng) {
    if (q.dim() < 4) throw HypothesisError("random_conjugate_ruling: dim >= 4 required");
    const CVec n0 = q.A * x0 + q.B;
    // directions v with n0^T v = 0 and w^T A v = 0: a (dim-2)-space
    CMat rows(2, q.dim());
    rows.row(0) = n0.transpose();
    rows.row(1) = (q.A * w).transpose();
    Eigen::FullPivLU<CMat> lu(rows);
    const CMat K = lu.kernel();
    if (K.cols() < 2) throw HypothesisError("random_conjugate_ruling: conjugate space too small");
    for (int attempt = 0; attempt < 64; ++attempt) {
        CVec c1(K.cols()), c2(K.cols());
        for (int i = 0; i < K.cols(); ++i) {
            c1(i) = Cplx(rng.uniform(-1, 1), rng.uniform(-1, 1));
            c2(i) = Cplx(rng.uniform(-1, 1), rng.uniform(-1, 1));
        }
        const CVec t1 = K * c1, t2 = K * c2;
        const Cplx a = bilinear(t1, CVec(q.A * t1));
        const Cplx b = bilinear(t1, CVec(q.A * t2));
        const Cplx c = bilinear(t2, CVec(q.A * t2));
        if (std::abs(a) < 1e-12) continue;
        const Cplx root = std::sqrt(b * b - a * c);
        const Cplx s = ((rng.below(2) == 0) ? (-b + root) : (-b - root)) / a;
        CVec v = s * t1 + t2;
        const double nn = v.norm();
        if (nn < 1e-9) continue;
        v /= nn;
        if (std::abs(bilinear(v, CVec(q.A * v))) < 1e-9 &&
            std::abs(bilinear(v, n0)) < 1e-9 * std::max(1.0, n0.norm()) &&
            std::abs(bilinear(w, CVec(q.A * v))) < 1e-9)
            return v;
    }
    throw Error("random_conjugate_ruling: sampling failed");
}

CVec random_ruling_at(const CanonicalQuadric& q, const CVec& x0, SplitMix64& rng) {
    if (q.dim() < 3) throw HypothesisError("random_ruling_at: rulings need dim >= 3");
    const CVec n0 = q.A * x0 + q.B;
    const CMat T = tangent_basis(n0);
    if (T.cols() < 2) throw HypothesisError("random_ruling_at: tangent space too small");
    for (int attempt = 0; attempt < 64; ++attempt) {
        // random 2-plane in the tangent space
        CVec c1(T.cols()), c2(T.cols());
        for (int i = 0; i < T.cols(); ++i) {
            c1(i) = Cplx(rng.uniform(-1, 1), rng.uniform(-1, 1));
            c2(i) = Cplx(rng.uniform(-1, 1), rng.uniform(-1, 1));
        }
        const CVec t1 = T * c1, t2 = T * c2;
        const Cplx a = bilinear(t1, CVec(q.A * t1));
        const Cplx b = bilinear(t1, CVec(q.A * t2));
        const Cplx c = bilinear(t2, CVec(q.A * t2));
        // w = s t1 + t2 with a s^2 + 2 b s + c = 0
        if (std::abs(a) < 1e-12) continue;
        const Cplx root = std::sqrt(b * b - a * c);
        const Cplx s = ((rng.below(2) == 0) ? (-b + root) : (-b - root)) / a;
        CVec w = s * t1 + t2;
        const double nn = w.norm();
        if (nn < 1e-9) continue;
        w /= nn;
        const double sw = std::max(1.0, w.norm());
        if (std::abs(bilinear(w, CVec(q.A * w))) < 1e-9 * sw &&
            std::abs(bilinear(w, n0)) < 1e-9 * std::max(1.0, n0.norm()))
            return w;
    }
    throw Error("random_ruling_at: sampling failed");
}

} // namespace confocal::sj
