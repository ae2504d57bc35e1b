#include "ttlab/trainer/perturbations.hpp"

#include <Eigen/QR>
#include <algorithm>

#include "ttlab/core/errors.hpp"

namespace ttlab::trainer {

MatX sample_perturbations(int d, int n, bool orthogonal, Rng& rng) {
    if (d < 1 || n < 1) throw InvalidArgument("perturbations: d and N must be positive");
    MatX out(n, d);
    if (!orthogonal) {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < d; ++j) out(i, j) = standard_normal(rng);
        return out;
    }
    const int block = std::min(n, d);
    for (int start = 0; start < n; start += block) {
        const int rows = std::min(block, n - start);
        MatX g(d, rows);
        for (int c = 0; c < rows; ++c)
            for (int r = 0; r < d; ++r) g(r, c) = standard_normal(rng);
        Eigen::HouseholderQR<MatX> qr(g);
        MatX q = qr.householderQ() * MatX::Identity(d, rows);
        const MatX& rmat = qr.matrixQR();
        for (int c = 0; c < rows; ++c) {
            if (rmat(c, c) < 0.0) q.col(c) = -q.col(c);
            double chi2 = 0.0;
            for (int r = 0; r < d; ++r) {
                const double z = standard_normal(rng);
                chi2 += z * z;
            }
            out.row(start + c) = q.col(c).transpose() * std::sqrt(chi2);
        }
    }
    return out;
}

}  // namespace ttlab::trainer
