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

#ifndef ORBITMAP_TRAINING_HPP_
#define ORBITMAP_TRAINING_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "orbitmap/distortion.hpp"
#include "orbitmap/embeddings.hpp"
#include "orbitmap/filters.hpp"
#include "orbitmap/groups.hpp"

namespace orbitmap {

enum class Architecture {
  kMF,    // trained templates, output is the bank itself (n = m)
  kLRMF,  // frozen Gaussian templates, trained linear map
  kLMF,   // templates and linear map trained jointly
  kReLU,  // x -> W2 relu(W1 x), trained on the group-augmented set
};

std::string to_string(Architecture arch);
Architecture architecture_from_string(const std::string& s);

struct TrainConfig {
  Architecture arch = Architecture::kLMF;
  int m = 16;
  int n = 16;
  int steps = 2000;
  double learning_rate = 1e-2;
  int restarts = 10;
  std::uint64_t seed = 0;
  std::size_t batch_pairs = 0;  // 0 = every pair each step
  int augmentation_samples = 16;

  /// Throws InvalidArgument naming the offending field.
  void validate() const;
  /// Output dimension of the trained model.
  int output_dim() const { return arch == Architecture::kMF ? m : n; }
};

struct TrainResult {
  EmbeddingModel model;
  DistortionReport train_report;
  std::vector<double> restart_dists;  // best training distortion of each restart
  std::vector<EmbeddingModel> restart_models;
  std::size_t best_restart = 0;
};

/// Minimizes log beta - log alpha over the training pairs with Adam and a
/// cosine learning-rate decay, keeping the best iterate of each restart and
/// the best restart overall. A warm start, when given, seeds restart 0.
TrainResult train(const TrainConfig& cfg, const GroupSpec& group, const PointSet& x_train,
                  const std::optional<EmbeddingModel>& warm_start = std::nullopt);

DistortionReport evaluate(const EmbeddingModel& model, const GroupSpec& group,
                          const PointSet& x_test);

struct RmfResult {
  FilterBank bank;
  DistortionReport report;
  std::size_t best_draw = 0;
};

/// Best of n_draws Gaussian max filter banks by test distortion. Draw t uses
/// the stream "rmf-draw-t", so a search with more draws extends a shorter one.
RmfResult rmf_search(const GroupSpec& group, int m, std::size_t n_draws, const PointSet& x_test,
                     std::uint64_t seed);

/// The templates y_i = e_1 + ... + e_i and the inverse of the lower triangular
/// all-ones matrix, for which L Phi(x) = sort(x) under coordinate permutations.
LinearOfBankModel staircase_sort_model(int d);

}  // namespace orbitmap

#endif  // ORBITMAP_TRAINING_HPP_
