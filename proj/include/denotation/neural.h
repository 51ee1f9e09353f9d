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


#ifndef DENOTATION_NEURAL_H_
#define DENOTATION_NEURAL_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <Eigen/Core>

#include "denotation/adam.h"
#include "denotation/linker.h"

namespace denotation {

inline constexpr size_t kEmbeddingDim = 8;
inline constexpr size_t kHiddenUnits = 8;
inline constexpr size_t kPretrainedDim = 10;
inline constexpr double kInitRange = 0.08;

// Fixed word vectors in the usual text format: a word followed by its
// whitespace-separated components, one word per line.
class PretrainedTable {
 public:
  PretrainedTable() = default;
  // Throws DataError on a malformed line or inconsistent dimensions.
  static PretrainedTable Load(const std::filesystem::path &path);
  static PretrainedTable FromMap(std::map<std::string, std::vector<double>> vectors);

  size_t dim() const { return dim_; }
  size_t size() const { return vectors_.size(); }
  const std::map<std::string, std::vector<double>> &vectors() const { return vectors_; }
  // Zero vector for unknown words.
  Eigen::VectorXd Lookup(std::string_view word) const;

 private:
  size_t dim_ = kPretrainedDim;
  std::map<std::string, std::vector<double>> vectors_;
};

// Token vocabulary shared by words and entities (entities are one token).
// Positional one-hot slots: 0..P-1 for question positions 1..P, then NULL
// (entity absent from the question) and ZERO (not an answer entity).
class Vocabulary {
 public:
  static constexpr int32_t kPad = 0;
  static constexpr int32_t kUnk = 1;

  Vocabulary();
  // Collects every word and entity token of the given pairs; P becomes the
  // largest number of question links seen.
  static Vocabulary Build(
      const std::vector<std::pair<LinkedUtterance, LinkedUtterance>> &pairs);
  static Vocabulary FromKeys(std::vector<std::string> keys, size_t max_question_entities);

  static std::string WordKey(std::string_view word);
  static std::string EntityKey(std::string_view entity);

  int32_t Index(const std::string &key) const;
  size_t size() const { return keys_.size(); }
  const std::vector<std::string> &keys() const { return keys_; }

  size_t max_question_entities() const { return max_question_entities_; }
  int32_t null_slot() const { return static_cast<int32_t>(max_question_entities_); }
  int32_t zero_slot() const { return static_cast<int32_t>(max_question_entities_) + 1; }
  size_t positional_width() const { return max_question_entities_ + 2; }

 private:
  void Add(const std::string &key);

  std::vector<std::string> keys_;
  std::unordered_map<std::string, int32_t> index_;
  size_t max_question_entities_ = 0;
};

struct EncodedSequence {
  std::vector<int32_t> tokens;
  // Surface word per position; empty for entity tokens.
  std::vector<std::string> words;
  // Entity id per position; empty for word tokens.
  std::vector<std::string> entities;
  // Positional one-hot slot per position.
  std::vector<int32_t> positions;
  std::vector<bool> answer_entity_mask;
  std::optional<size_t> gold_position;

  size_t size() const { return tokens.size(); }
};

// Question tokens followed by answer tokens, each link collapsed into one
// entity token. With a gold id, marks its first answer occurrence; throws
// std::invalid_argument when the gold id is not among the answer links.
EncodedSequence EncodePair(const Vocabulary &vocab, const LinkedUtterance &question,
                           const LinkedUtterance &answer,
                           const std::optional<std::string> &gold = std::nullopt);

struct ModelFlags {
  bool use_positional_features = true;
  bool use_pretrained = false;
  friend bool operator==(const ModelFlags &, const ModelFlags &) = default;
};

struct LstmWeights {
  Eigen::MatrixXd input;      // 4H x D, gate blocks ordered i, f, g, o
  Eigen::MatrixXd recurrent;  // 4H x H
  Eigen::MatrixXd bias;       // 4H x 1
};

// Trainable tensors. Gradients use the same structure.
struct Parameters {
  Eigen::MatrixXd embedding;  // kEmbeddingDim x vocabulary size
  LstmWeights forward;
  LstmWeights backward;
  Eigen::MatrixXd output;     // 2H x 1

  std::vector<Eigen::MatrixXd *> Tensors();
  std::vector<const Eigen::MatrixXd *> Tensors() const;
  static const std::vector<std::string> &TensorNames();
  // Same shapes, all zeros.
  Parameters ZerosLike() const;
};

struct Prediction {
  size_t position = 0;
  std::string entity;
  double probability = 0.0;
};

// Embeddings -> bidirectional LSTM -> scalar score per position -> softmax
// over the whole sequence.
class NeuralModel {
 public:
  // Weights uniform in +-kInitRange and biases zero, except the forget-gate
  // biases which start at 1.
  NeuralModel(Vocabulary vocab, ModelFlags flags,
              std::optional<PretrainedTable> pretrained, uint64_t seed);

  const Vocabulary &vocab() const { return vocab_; }
  const ModelFlags &flags() const { return flags_; }
  const std::optional<PretrainedTable> &pretrained() const { return pretrained_; }
  size_t pretrained_dim() const;
  size_t input_dim() const;

  Parameters &params() { return params_; }
  const Parameters &params() const { return params_; }

  // Per-position probabilities. Throws std::invalid_argument when empty.
  Eigen::VectorXd Forward(const EncodedSequence &seq) const;
  // Loss at `gold_position` and its exact gradient for every tensor.
  Parameters Backward(const EncodedSequence &seq, size_t gold_position,
                      double *loss = nullptr) const;
  // Most probable answer-entity position, leftmost on ties. Throws
  // std::invalid_argument when the sequence has no answer entity.
  Prediction Predict(const EncodedSequence &seq) const;

  // Self-describing JSON checkpoint; a loaded model reproduces Forward
  // outputs bit for bit.
  void Save(const std::filesystem::path &path) const;
  static NeuralModel Load(const std::filesystem::path &path);
  std::string Serialize() const;
  static NeuralModel Deserialize(const std::string &text);

 private:
  Eigen::MatrixXd Inputs(const EncodedSequence &seq) const;

  Vocabulary vocab_;
  ModelFlags flags_;
  std::optional<PretrainedTable> pretrained_;
  Parameters params_;
};

// Most probable masked position, leftmost on ties. Throws
// std::invalid_argument when no position is masked.
size_t MaskedArgmax(const Eigen::VectorXd &probabilities, const std::vector<bool> &mask);

// -log d[gold], with d clamped below at 1e-12.
double CrossEntropy(const Eigen::VectorXd &probabilities, size_t gold_position);

struct TrainingConfig {
  size_t epochs = 50;
  uint64_t seed = 0;
  AdamConfig adam;
  ModelFlags flags;
};

struct EpochLog {
  size_t epoch = 0;
  double mean_loss = 0.0;
  double train_accuracy = 0.0;
  double val_accuracy = 0.0;
};

struct TrainingResult {
  NeuralModel model;
  std::vector<EpochLog> log;
  size_t best_epoch = 0;
};

// Fraction of sequences whose predicted entity equals the entity at their
// gold position.
double ArgmaxAccuracy(const NeuralModel &model, const std::vector<EncodedSequence> &data);

// Per-example Adam updates over a seeded shuffle each epoch. Keeps the
// parameters of the epoch with the best validation accuracy (earliest on
// ties); with an empty validation set, training accuracy is used instead.
// Throws std::invalid_argument for an empty training set, a training
// sequence without gold position, or zero epochs.
TrainingResult TrainModel(const Vocabulary &vocab,
                          std::optional<PretrainedTable> pretrained,
                          const std::vector<EncodedSequence> &train,
                          const std::vector<EncodedSequence> &val,
                          const TrainingConfig &config);

}  // namespace denotation

#endif  // DENOTATION_NEURAL_H_
