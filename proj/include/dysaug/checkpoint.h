// include/dysaug/checkpoint.h

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

#ifndef DYSAUG_CHECKPOINT_H_
#define DYSAUG_CHECKPOINT_H_

#include <map>
#include <string>
#include <vector>

#include "dysaug/autograd.h"

namespace dysaug::autograd {

// Text checkpoint container:
//   dysaug-checkpoint v1
//   meta <single-line JSON, may be {}>
//   param <name> <ndim> <d0> <d1> ...
//   <values, one line, %.17g each>
// Values are written at 17 significant digits, so load(save(x)) is bit-exact.
struct Checkpoint {
  std::string meta;  // raw JSON line
  std::vector<std::pair<std::string, Tensor>> params;  // file order

  const Tensor& at(const std::string& name) const;
  bool has(const std::string& name) const;
};

void save_checkpoint(const std::string& path, const std::string& meta_json,
                     const std::vector<std::pair<std::string, Tensor>>& params);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace dysaug::autograd

#endif  // DYSAUG_CHECKPOINT_H_
