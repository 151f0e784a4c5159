/*
 * Copyright 2026 The Handbrain Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <algorithm>
#include <cmath>

#include "handbrain/learner/learner.hpp"

namespace handbrain::learner {

namespace {

// Margins beyond this saturate; log p_t stays finite well inside it.
constexpr double kMarginClamp = 500.0;

// log(1 + e^x) without overflow.
double softplus(double x) { return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); }

}  // namespace

void LossParams::validate() const {
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) throw UsageError("gamma must be >= 0");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw UsageError("alpha must be in (0, 1]");
  if (!(beta >= 0.0) || !std::isfinite(beta)) throw UsageError("beta must be >= 0");
}

double logistic(double margin) {
  if (margin >= 0.0) return 1.0 / (1.0 + std::exp(-margin));
  const double e = std::exp(margin);
  return e / (1.0 + e);
}

double time_weight(double elapsed_norm, double beta) { return std::exp(beta * elapsed_norm); }

// With q = p_t, u = 1 - q and s = +1 for positives, -1 for negatives:
//   dL/dm   = s * alpha * (gamma q u^gamma log q - u^(gamma+1))
//   d2L/dm2 = alpha q (gamma u^gamma log q (u - gamma q) + (2 gamma + 1) u^(gamma+1))
FocalTerms focal_terms(double margin, int y, const LossParams& lp) {
  const double m = std::clamp(margin, -kMarginClamp, kMarginClamp);
  const double s = y == 1 ? 1.0 : -1.0;
  const double q = logistic(s * m);
  const double u = logistic(-s * m);
  const double log_q = -softplus(-s * m);
  const double g = lp.gamma;
  const double ug = g == 0.0 ? 1.0 : std::pow(u, g);

  FocalTerms t;
  t.loss = -lp.alpha * ug * log_q;
  const double glog = g == 0.0 ? 0.0 : g * ug * log_q;
  t.gradient = s * lp.alpha * (q * glog - ug * u);
  t.raw_hessian = lp.alpha * q * (glog * (u - g * q) + (2.0 * g + 1.0) * ug * u);
  t.hessian = std::max(t.raw_hessian, kHessianFloor);
  return t;
}

}  // namespace handbrain::learner
