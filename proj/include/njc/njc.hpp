#ifndef NJC_NJC_HPP
#define NJC_NJC_HPP

#include "njc/common.hpp"
#include "njc/estimator.hpp"
#include "njc/metric.hpp"
#include "njc/product.hpp"
#include "njc/properties.hpp"
#include "njc/qspace.hpp"
#include "njc/rational.hpp"
#include "njc/vec.hpp"
#include "njc/zoo.hpp"

#endif  // NJC_NJC_HPP
