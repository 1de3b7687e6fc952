#ifndef TAILNET_COMMON_HPP
#define TAILNET_COMMON_HPP

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace tailnet {

using Eigen::MatrixXd;
using Eigen::VectorXd;

/// n x 2 matrix of bivariate observations, one row per replicate.
using PairMatrix = Eigen::Matrix<double, Eigen::Dynamic, 2>;

enum class Scale { raw, uniform };

/// Bivariate sample plus the scale its margins live on.
struct BivariateSample {
  PairMatrix values;
  Scale scale = Scale::raw;

  Eigen::Index rows() const { return values.rows(); }
};

struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

#define TAILNET_DEFINE_ERROR(NAME)                                 \
  struct NAME : Error {                                            \
    explicit NAME(const std::string& msg) : Error(#NAME ": " + msg) {} \
  }

TAILNET_DEFINE_ERROR(DomainError);
TAILNET_DEFINE_ERROR(ParamError);
TAILNET_DEFINE_ERROR(SizeError);
TAILNET_DEFINE_ERROR(QuadratureError);
TAILNET_DEFINE_ERROR(ConvergenceError);
TAILNET_DEFINE_ERROR(SupportError);
TAILNET_DEFINE_ERROR(NoExceedanceError);
TAILNET_DEFINE_ERROR(WeightError);
TAILNET_DEFINE_ERROR(DimError);
TAILNET_DEFINE_ERROR(ShapeError);
TAILNET_DEFINE_ERROR(SimplexError);
TAILNET_DEFINE_ERROR(SchemaError);
TAILNET_DEFINE_ERROR(IOError);
TAILNET_DEFINE_ERROR(RejectionBudgetError);
TAILNET_DEFINE_ERROR(DivergenceError);
TAILNET_DEFINE_ERROR(ConfigError);
TAILNET_DEFINE_ERROR(BundleMismatchError);

#undef TAILNET_DEFINE_ERROR

}  // namespace tailnet

#endif  // TAILNET_COMMON_HPP
