// Copyright 2026 The orbitmap Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ORBITMAP_COMMON_HPP_
#define ORBITMAP_COMMON_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace orbitmap {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using VectorRef = Eigen::Ref<const Eigen::VectorXd>;
using MatrixRef = Eigen::Ref<const Eigen::MatrixXd>;

// Point sets are stored column-per-point: a D x N matrix holds N points of
// the ambient space R^D.
using PointSet = Eigen::MatrixXd;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class ContinuousGroupError : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class DegenerateData : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

inline void require_dim(Eigen::Index got, Eigen::Index want, const char* what) {
  if (got != want) {
    throw DimensionMismatch(std::string(what) + ": expected dimension " +
                            std::to_string(want) + ", got " +
                            std::to_string(got));
  }
}

}  // namespace orbitmap

#endif  // ORBITMAP_COMMON_HPP_
