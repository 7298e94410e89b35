#ifndef RICWAVE_TYPES_HPP
#define RICWAVE_TYPES_HPP

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>

namespace ricwave {

using Complex = std::complex<double>;
using Vec2 = Eigen::Vector2d;
using Vec4 = Eigen::Vector4d;
using Mat2 = Eigen::Matrix2d;
using Mat4 = Eigen::Matrix4d;
using Mat2c = Eigen::Matrix2cd;
using Mat4c = Eigen::Matrix4cd;
using Vec4c = Eigen::Vector4cd;
using Mat42c = Eigen::Matrix<Complex, 4, 2>;
using Vec6c = Eigen::Matrix<Complex, 6, 1>;

struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SingularLimit : NumericalError { using NumericalError::NumericalError; };
struct DegenerateJump : NumericalError { using NumericalError::NumericalError; };
struct FoldCollision : NumericalError { using NumericalError::NumericalError; };
struct NoConvergence : NumericalError { using NumericalError::NumericalError; };
struct DomainTooShort : NumericalError { using NumericalError::NumericalError; };
struct ContinuationStuck : NumericalError { using NumericalError::NumericalError; };
struct BadProfileFile : NumericalError { using NumericalError::NumericalError; };
struct OutOfDomain : NumericalError { using NumericalError::NumericalError; };
struct BranchPoint : NumericalError { using NumericalError::NumericalError; };
struct NearDegenerate : NumericalError { using NumericalError::NumericalError; };
struct DegenerateFrame : NumericalError { using NumericalError::NumericalError; };
struct NotInChart : NumericalError { using NumericalError::NumericalError; };
struct OnPath : NumericalError { using NumericalError::NumericalError; };
struct NonConvergentRefinement : NumericalError { using NumericalError::NumericalError; };
struct ClusterUnresolved : NumericalError { using NumericalError::NumericalError; };
struct RootLost : NumericalError { using NumericalError::NumericalError; };
struct NoStabilisingWeight : NumericalError { using NumericalError::NumericalError; };

struct ChartSingularity : NumericalError {
  double z_hit;
  explicit ChartSingularity(double z)
      : NumericalError("Riccati solution left the chart near z = " + std::to_string(z)),
        z_hit(z) {}
};

}  // namespace ricwave

#endif
