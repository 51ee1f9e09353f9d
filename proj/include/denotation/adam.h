// Copyright 2026 The Denotation Authors.
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


#ifndef DENOTATION_ADAM_H_
#define DENOTATION_ADAM_H_

#include <cstdint>
#include <vector>

#include <Eigen/Core>

namespace denotation {

// Defaults from the original Adam publication.
struct AdamConfig {
  double learning_rate = 0.001;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

// Adam with bias-corrected first and second moment estimates. The moment
// buffers are shaped lazily on the first step.
class AdamOptimizer {
 public:
  explicit AdamOptimizer(AdamConfig config = {}) : config_(config) {}

  // Throws std::invalid_argument if the tensor lists disagree in count or
  // shape with each other or with the buffers from earlier steps.
  void Step(const std::vector<Eigen::MatrixXd *> &params,
            const std::vector<const Eigen::MatrixXd *> &grads);

  int64_t step_count() const { return step_; }
  const AdamConfig &config() const { return config_; }
  const std::vector<Eigen::MatrixXd> &first_moments() const { return m_; }
  const std::vector<Eigen::MatrixXd> &second_moments() const { return v_; }

 private:
  AdamConfig config_;
  int64_t step_ = 0;
  std::vector<Eigen::MatrixXd> m_;
  std::vector<Eigen::MatrixXd> v_;
};

}  // namespace denotation

#endif  // DENOTATION_ADAM_H_
