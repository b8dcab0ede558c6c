// Discrete algebraic Riccati equation solver via the structure-preserving
// doubling algorithm, plus the residual and gain helpers used by both the
// LQR and Kalman designs.
#pragma once

#include <Eigen/Dense>
#include <stdexcept>

namespace dcmwalk {

/// Solves A'PA - P - A'PB (R + B'PB)^-1 B'PA + Q = 0 for the stabilizing P.
inline Eigen::MatrixXd dare_solve(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                                  const Eigen::MatrixXd& Q, const Eigen::MatrixXd& R,
                                  double tol = 1e-13, int max_iter = 200) {
    const auto n = A.rows();
    Eigen::LLT<Eigen::MatrixXd> r_llt(R);
    if (r_llt.info() != Eigen::Success)
        throw std::invalid_argument("dare_solve: R must be positive definite");

    // Doubling iteration: each pass squares the implicit closed-loop map, so
    // convergence is quadratic for stabilizable/detectable data.
    Eigen::MatrixXd A_k = A;
    Eigen::MatrixXd G_k = B * r_llt.solve(B.transpose());
    Eigen::MatrixXd H_k = Q;
    for (int it = 0; it < max_iter; ++it) {
        const Eigen::MatrixXd W = Eigen::MatrixXd::Identity(n, n) + G_k * H_k;
        const auto W_lu = W.partialPivLu();
        const Eigen::MatrixXd V1 = W_lu.solve(A_k);
        const Eigen::MatrixXd V2 = W_lu.solve(G_k.transpose()).transpose();
        const Eigen::MatrixXd H_next = H_k + V1.transpose() * H_k * A_k;
        G_k += A_k * V2 * A_k.transpose();
        A_k = A_k * V1;
        const double delta = (H_next - H_k).norm();
        H_k = H_next;
        if (delta <= tol * std::max(1.0, H_k.norm())) return H_k;
    }
    throw std::runtime_error("dare_solve: no convergence within iteration cap");
}

/// Frobenius norm of the DARE residual at P.
inline double dare_residual(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                            const Eigen::MatrixXd& Q, const Eigen::MatrixXd& R,
                            const Eigen::MatrixXd& P) {
    const Eigen::MatrixXd S = R + B.transpose() * P * B;
    const Eigen::MatrixXd res = A.transpose() * P * A - P -
                                A.transpose() * P * B * S.ldlt().solve(B.transpose() * P * A) +
                                Q;
    return res.norm();
}

/// LQR gain K = (R + B'PB)^-1 B'PA from the stabilizing DARE solution.
inline Eigen::MatrixXd lqr_gain(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                                const Eigen::MatrixXd& Q, const Eigen::MatrixXd& R,
                                Eigen::MatrixXd* P_out = nullptr) {
    const Eigen::MatrixXd P = dare_solve(A, B, Q, R);
    if (P_out) *P_out = P;
    const Eigen::MatrixXd S = R + B.transpose() * P * B;
    return S.ldlt().solve(B.transpose() * P * A);
}

/// Steady-state Kalman gain for x+ = A x + w, y = C x + v via the dual DARE.
/// Returns the innovation gain L used in x^ = x^- + L (y - C x^-).
inline Eigen::MatrixXd kalman_gain(const Eigen::MatrixXd& A, const Eigen::MatrixXd& C,
                                   const Eigen::MatrixXd& process_cov,
                                   const Eigen::MatrixXd& meas_cov,
                                   Eigen::MatrixXd* P_out = nullptr) {
    const Eigen::MatrixXd P = dare_solve(A.transpose(), C.transpose(), process_cov, meas_cov);
    if (P_out) *P_out = P;
    const Eigen::MatrixXd S = C * P * C.transpose() + meas_cov;
    // L = P C' S^-1, via S' X' = (P C')' for numerical symmetry.
    return S.ldlt().solve(C * P.transpose()).transpose();
}

inline double spectral_radius(const Eigen::MatrixXd& M) {
    return M.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace dcmwalk
