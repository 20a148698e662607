#include "cavevote/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <Eigen/Dense>

namespace cavevote {

double pearson(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size()) throw std::invalid_argument("pearson: series lengths differ");
    if (xs.size() < 2) throw std::invalid_argument("pearson: need at least two observations");
    const double n = static_cast<double>(xs.size());
    const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
    const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
    double sxx = 0, syy = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double dx = xs[i] - mx, dy = ys[i] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (sxx == 0.0 || syy == 0.0) throw UndefinedCorrelation("pearson: constant series has no correlation");
    const double r = sxy / std::sqrt(sxx * syy);
    return std::clamp(r, -1.0, 1.0);
}

namespace {

double r_squared(const Eigen::MatrixXd& design, const Eigen::VectorXd& y, const Eigen::VectorXd& beta) {
    const Eigen::VectorXd resid = y - design * beta;
    const double ss_res = resid.squaredNorm();
    const double ss_tot = (y.array() - y.mean()).matrix().squaredNorm();
    return ss_tot > 0 ? 1.0 - ss_res / ss_tot : (ss_res == 0 ? 1.0 : 0.0);
}

Eigen::MatrixXd design_rows(const std::vector<std::vector<double>>& features, const std::vector<std::size_t>& rows) {
    Eigen::MatrixXd x(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(features.size() + 1));
    for (std::size_t r = 0; r < rows.size(); ++r) {
        for (std::size_t c = 0; c < features.size(); ++c)
            x(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = features[c][rows[r]];
        x(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(features.size())) = 1.0;
    }
    return x;
}

Eigen::VectorXd target_rows(std::span<const double> target, const std::vector<std::size_t>& rows) {
    Eigen::VectorXd y(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t r = 0; r < rows.size(); ++r) y(static_cast<Eigen::Index>(r)) = target[rows[r]];
    return y;
}

}  // namespace

RegressionResult ols_fit(const std::vector<std::vector<double>>& features, std::span<const double> target,
                         double train_fraction, Seed seed) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0)) throw std::invalid_argument("train fraction must lie in (0, 1)");
    const std::size_t rows = target.size();
    for (const auto& col : features) {
        if (col.size() != rows) throw std::invalid_argument("feature column length differs from target length");
    }
    std::vector<std::size_t> order(rows);
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(derive_seed(seed, Stream::Split));
    rng.shuffle(order);
    const auto n_train = static_cast<std::size_t>(std::llround(train_fraction * static_cast<double>(rows)));
    const std::size_t params = features.size() + 1;
    if (n_train < params) throw std::invalid_argument("too few training rows for the number of features");
    if (rows - n_train < 1) throw std::invalid_argument("no rows left for testing");

    std::vector<std::size_t> train(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
    std::vector<std::size_t> test(order.begin() + static_cast<std::ptrdiff_t>(n_train), order.end());
    std::sort(train.begin(), train.end());
    std::sort(test.begin(), test.end());

    const Eigen::MatrixXd x = design_rows(features, train);
    const Eigen::VectorXd y = target_rows(target, train);
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
    if (qr.rank() < static_cast<Eigen::Index>(params)) throw std::invalid_argument("design matrix is rank deficient");
    const Eigen::VectorXd beta = qr.solve(y);

    RegressionResult out;
    for (std::size_t c = 0; c < features.size(); ++c) out.coefficients.push_back(beta(static_cast<Eigen::Index>(c)));
    out.intercept = beta(static_cast<Eigen::Index>(features.size()));
    out.train_r_squared = r_squared(x, y, beta);
    out.r_squared = r_squared(design_rows(features, test), target_rows(target, test), beta);
    out.train_fraction = train_fraction;
    out.train_rows = train.size();
    out.test_rows = test.size();
    out.train_index = std::move(train);
    return out;
}

}  // namespace cavevote
