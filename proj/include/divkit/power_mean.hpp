#pragma once

namespace divkit {

// Power mean of two nonnegative numbers, ((r^p + t^p)/2)^(1/p).
//
// Conventions at the edges: p = 0 is the geometric mean sqrt(r*t); p = +inf
// and p = -inf are max and min; for p < 0 a zero argument forces the mean to
// zero. Stable for any order: near p = 0 a log-domain expansion is used, for
// large |p| the computation is anchored at the dominant argument so nothing
// overflows.
double power_mean(double p, double r, double t);

}  // namespace divkit
