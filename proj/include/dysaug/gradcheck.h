// include/dysaug/gradcheck.h

// Copyright 2026  dysaug authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef DYSAUG_GRADCHECK_H_
#define DYSAUG_GRADCHECK_H_

#include <string>
#include <vector>

namespace dysaug::autograd {

struct GradCheckResult {
  std::string op;
  double max_rel_err = 0.0;
  bool pass = false;
};

// Central finite-difference verification of every differentiable op (the CTC
// loss included), >= `probes` random coordinates per parameter, eps = 1e-5,
// pass threshold `tol`. Deterministic per seed.
std::vector<GradCheckResult> run_gradient_checks(double tol = 1e-4,
                                                 int probes = 20,
                                                 uint64_t seed = 0);

}  // namespace dysaug::autograd

#endif  // DYSAUG_GRADCHECK_H_
