#pragma once

#include <cstdint>
#include <functional>

#include <Eigen/Core>

namespace iprox {

using Vec = Eigen::VectorXd;
using VecMap = std::function<Vec(const Vec&)>;
using ScalarFn = std::function<double(const Vec&)>;

}  // namespace iprox
