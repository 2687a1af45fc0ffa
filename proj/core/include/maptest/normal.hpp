#pragma once

namespace maptest {

// Standard normal cdf, evaluated through erfc in both tails.
double normal_cdf(double x);

// Upper tail 1 - cdf(x), accurate for large positive x.
double normal_ccdf(double x);

// Inverse cdf. Throws ErrorCode::infinite_quantile for p outside (0, 1).
double normal_quantile(double p);

}  // namespace maptest
