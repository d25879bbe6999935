// src/checkpoint.cc

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

#include "dysaug/checkpoint.h"

#include <fstream>
#include <sstream>

namespace dysaug::autograd {

const Tensor& Checkpoint::at(const std::string& name) const {
  for (const auto& [n, t] : params)
    if (n == name) return t;
  throw DataError("checkpoint: missing parameter '" + name + "'");
}

bool Checkpoint::has(const std::string& name) const {
  for (const auto& [n, t] : params)
    if (n == name) return true;
  return false;
}

void save_checkpoint(
    const std::string& path, const std::string& meta_json,
    const std::vector<std::pair<std::string, Tensor>>& params) {
  std::ofstream f(path);
  if (!f) throw DataError("cannot write checkpoint " + path);
  f << "dysaug-checkpoint v1\n";
  std::string meta = meta_json.empty() ? "{}" : meta_json;
  if (meta.find('\n') != std::string::npos)
    throw DataError("checkpoint meta must be a single line");
  f << "meta " << meta << "\n";
  for (const auto& [name, t] : params) {
    if (name.find_first_of(" \n") != std::string::npos)
      throw DataError("checkpoint: parameter name '" + name +
                      "' contains whitespace");
    f << "param " << name << " " << t.shape().size();
    for (int d : t.shape()) f << " " << d;
    f << "\n";
    const auto& v = t.data();
    for (size_t i = 0; i < v.size(); ++i) {
      if (i) f << " ";
      f << format_double17(v[i]);
    }
    f << "\n";
  }
  if (!f) throw DataError("short write to checkpoint " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw DataError("cannot open checkpoint " + path);
  std::string line;
  if (!std::getline(f, line) || line != "dysaug-checkpoint v1")
    throw DataError(path + ": not a dysaug checkpoint");
  Checkpoint ck;
  if (!std::getline(f, line) || line.rfind("meta ", 0) != 0)
    throw DataError(path + ": missing meta line");
  ck.meta = line.substr(5);
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    std::istringstream hs(line);
    std::string tag, name;
    int ndim;
    if (!(hs >> tag >> name >> ndim) || tag != "param")
      throw DataError(path + ": malformed param header '" + line + "'");
    Shape shape(ndim);
    int64_t n = 1;
    for (int i = 0; i < ndim; ++i) {
      if (!(hs >> shape[i]) || shape[i] <= 0)
        throw DataError(path + ": bad shape for param '" + name + "'");
      n *= shape[i];
    }
    if (!std::getline(f, line))
      throw DataError(path + ": missing values for param '" + name + "'");
    std::istringstream vs(line);
    std::vector<double> vals(static_cast<size_t>(n));
    for (auto& x : vals)
      if (!(vs >> x))
        throw DataError(path + ": truncated values for param '" + name + "'");
    ck.params.emplace_back(name,
                           Tensor::from_data(shape, std::move(vals), true));
  }
  return ck;
}

}  // namespace dysaug::autograd
