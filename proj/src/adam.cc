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


#include "denotation/adam.h"

#include <cmath>
#include <stdexcept>

namespace denotation {

void AdamOptimizer::Step(const std::vector<Eigen::MatrixXd *> &params,
                         const std::vector<const Eigen::MatrixXd *> &grads) {
  if (params.size() != grads.size()) {
    throw std::invalid_argument("parameter and gradient counts differ");
  }
  if (!m_.empty() && m_.size() != params.size()) {
    throw std::invalid_argument("parameter count changed between steps");
  }
  for (size_t i = 0; i < params.size(); ++i) {
    if (params[i]->rows() != grads[i]->rows() || params[i]->cols() != grads[i]->cols()) {
      throw std::invalid_argument("gradient shape does not match parameter shape");
    }
    if (!m_.empty() &&
        (m_[i].rows() != params[i]->rows() || m_[i].cols() != params[i]->cols())) {
      throw std::invalid_argument("parameter shape changed between steps");
    }
  }
  if (m_.empty()) {
    for (const Eigen::MatrixXd *p : params) {
      m_.push_back(Eigen::MatrixXd::Zero(p->rows(), p->cols()));
      v_.push_back(Eigen::MatrixXd::Zero(p->rows(), p->cols()));
    }
  }

  ++step_;
  const double b1 = config_.beta1, b2 = config_.beta2;
  const double correction1 = 1.0 - std::pow(b1, static_cast<double>(step_));
  const double correction2 = 1.0 - std::pow(b2, static_cast<double>(step_));
  for (size_t i = 0; i < params.size(); ++i) {
    const Eigen::MatrixXd &g = *grads[i];
    m_[i] = b1 * m_[i] + (1.0 - b1) * g;
    v_[i] = b2 * v_[i] + (1.0 - b2) * g.cwiseProduct(g);
    Eigen::MatrixXd m_hat = m_[i] / correction1;
    Eigen::MatrixXd v_hat = v_[i] / correction2;
    params[i]->array() -=
        config_.learning_rate * m_hat.array() / (v_hat.array().sqrt() + config_.epsilon);
  }
}

}  // namespace denotation
