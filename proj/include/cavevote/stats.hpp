#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "cavevote/rng.hpp"

namespace cavevote {

/// Thrown when a correlation is requested for a constant series.
class UndefinedCorrelation : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Sample Pearson correlation of two equal-length series (length >= 2).
double pearson(std::span<const double> xs, std::span<const double> ys);

struct RegressionResult {
    std::vector<double> coefficients;  // one per feature column, in column order
    double intercept = 0;
    double r_squared = 0;        // on the held-out rows
    double train_r_squared = 0;  // on the training rows
    double train_fraction = 0;
    std::size_t train_rows = 0;
    std::size_t test_rows = 0;
    std::vector<std::size_t> train_index;  // rows used for fitting
};

/// Ordinary least squares with intercept.
///
/// `features` holds one column per feature. Rows are split into train/test by
/// a seeded shuffle; the first round(train_fraction * rows) shuffled rows fit
/// the model and the rest score it.
RegressionResult ols_fit(const std::vector<std::vector<double>>& features, std::span<const double> target,
                         double train_fraction, Seed seed);

}  // namespace cavevote
