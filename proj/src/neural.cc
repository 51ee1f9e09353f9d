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


#include "denotation/neural.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "json.hpp"

#include "denotation/errors.h"
#include "denotation/io.h"

namespace denotation {

using Eigen::MatrixXd;
using Eigen::VectorXd;
using json = nlohmann::json;

namespace {

constexpr char kCheckpointFormat[] = "denotation-neural-v1";
constexpr Eigen::Index H = kHiddenUnits;

// Uniform in [0, 1) from the top 53 bits; identical on every platform.
double UnitUniform(std::mt19937_64 &rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

void FillUniform(MatrixXd &m, std::mt19937_64 &rng) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      m(i, j) = (2.0 * UnitUniform(rng) - 1.0) * kInitRange;
    }
  }
}

VectorXd Sigmoid(const VectorXd &z) {
  return (1.0 + (-z.array()).exp()).inverse().matrix();
}

VectorXd Softmax(const VectorXd &logits) {
  VectorXd e = (logits.array() - logits.maxCoeff()).exp().matrix();
  return e / e.sum();
}

// Activations of one LSTM direction, indexed by processing step.
struct LstmTrace {
  std::vector<size_t> order;
  std::vector<VectorXd> i, f, g, o, c, tanh_c, h;
  MatrixXd hidden;  // H x T, by sequence position
};

LstmTrace RunLstm(const LstmWeights &w, const MatrixXd &x, bool reverse) {
  const Eigen::Index steps = x.cols();
  LstmTrace tr;
  tr.hidden = MatrixXd::Zero(H, steps);
  VectorXd h = VectorXd::Zero(H), c = VectorXd::Zero(H);
  for (Eigen::Index s = 0; s < steps; ++s) {
    const Eigen::Index t = reverse ? steps - 1 - s : s;
    VectorXd z = w.input * x.col(t) + w.recurrent * h + w.bias.col(0);
    VectorXd i = Sigmoid(z.segment(0, H));
    VectorXd f = Sigmoid(z.segment(H, H));
    VectorXd g = z.segment(2 * H, H).array().tanh().matrix();
    VectorXd o = Sigmoid(z.segment(3 * H, H));
    c = f.cwiseProduct(c) + i.cwiseProduct(g);
    VectorXd tc = c.array().tanh().matrix();
    h = o.cwiseProduct(tc);
    tr.order.push_back(static_cast<size_t>(t));
    tr.i.push_back(std::move(i));
    tr.f.push_back(std::move(f));
    tr.g.push_back(std::move(g));
    tr.o.push_back(std::move(o));
    tr.c.push_back(c);
    tr.tanh_c.push_back(std::move(tc));
    tr.h.push_back(h);
    tr.hidden.col(t) = h;
  }
  return tr;
}

// Backpropagation through time for one direction. `d_hidden` holds the
// loss gradient w.r.t. each position's hidden state; input gradients are
// accumulated into `d_inputs`.
void BackpropLstm(const LstmWeights &w, const LstmTrace &tr, const MatrixXd &x,
                  const MatrixXd &d_hidden, LstmWeights &grad, MatrixXd &d_inputs) {
  const VectorXd zero = VectorXd::Zero(H);
  VectorXd dh_next = zero, dc_next = zero;
  for (size_t s = tr.order.size(); s-- > 0;) {
    const size_t t = tr.order[s];
    const VectorXd &c_prev = s > 0 ? tr.c[s - 1] : zero;
    const VectorXd &h_prev = s > 0 ? tr.h[s - 1] : zero;
    const VectorXd &i = tr.i[s], &f = tr.f[s], &g = tr.g[s], &o = tr.o[s];
    const VectorXd &tc = tr.tanh_c[s];

    VectorXd dh = d_hidden.col(static_cast<Eigen::Index>(t)) + dh_next;
    VectorXd d_o = dh.cwiseProduct(tc);
    VectorXd dc = dh.cwiseProduct(o).cwiseProduct(
                      (1.0 - tc.array().square()).matrix()) + dc_next;
    VectorXd dz(4 * H);
    dz.segment(0, H) = dc.cwiseProduct(g).cwiseProduct(i.cwiseProduct((1.0 - i.array()).matrix()));
    dz.segment(H, H) = dc.cwiseProduct(c_prev).cwiseProduct(f.cwiseProduct((1.0 - f.array()).matrix()));
    dz.segment(2 * H, H) = dc.cwiseProduct(i).cwiseProduct((1.0 - g.array().square()).matrix());
    dz.segment(3 * H, H) = d_o.cwiseProduct(o.cwiseProduct((1.0 - o.array()).matrix()));

    grad.input.noalias() += dz * x.col(static_cast<Eigen::Index>(t)).transpose();
    grad.recurrent.noalias() += dz * h_prev.transpose();
    grad.bias.col(0) += dz;
    d_inputs.col(static_cast<Eigen::Index>(t)).noalias() += w.input.transpose() * dz;
    dh_next = w.recurrent.transpose() * dz;
    dc_next = dc.cwiseProduct(f);
  }
}

LstmWeights InitLstm(Eigen::Index input_dim, std::mt19937_64 &rng) {
  LstmWeights w{MatrixXd(4 * H, input_dim), MatrixXd(4 * H, H), MatrixXd::Zero(4 * H, 1)};
  FillUniform(w.input, rng);
  FillUniform(w.recurrent, rng);
  w.bias.block(H, 0, H, 1).setOnes();
  return w;
}

json TensorToJson(const MatrixXd &m) {
  json data = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) data.push_back(m(i, j));
  }
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

MatrixXd TensorFromJson(const json &j, Eigen::Index rows, Eigen::Index cols,
                        const std::string &name) {
  if (j.at("rows").get<Eigen::Index>() != rows || j.at("cols").get<Eigen::Index>() != cols) {
    throw DataError("checkpoint tensor '" + name + "' has an unexpected shape");
  }
  const json &data = j.at("data");
  if (data.size() != static_cast<size_t>(rows * cols)) {
    throw DataError("checkpoint tensor '" + name + "' has the wrong element count");
  }
  MatrixXd m(rows, cols);
  size_t k = 0;
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j2 = 0; j2 < cols; ++j2) m(i, j2) = data[k++].get<double>();
  }
  return m;
}

}  // namespace

// ---------------------------------------------------------------------------
// PretrainedTable

PretrainedTable PretrainedTable::Load(const std::filesystem::path &path) {
  std::ifstream in = OpenInput(path);
  std::map<std::string, std::vector<double>> vectors;
  std::optional<size_t> dim;
  std::string line;
  size_t line_no = 0;
  while (ReadLine(in, line)) {
    ++line_no;
    std::istringstream fields(line);
    std::string word;
    if (!(fields >> word)) continue;
    std::vector<double> values;
    std::string token;
    while (fields >> token) {
      try {
        size_t used = 0;
        values.push_back(std::stod(token, &used));
        if (used != token.size()) throw std::invalid_argument(token);
      } catch (const std::exception &) {
        throw DataError(LocatedMessage(path.string(), line_no,
                                       "invalid vector component '" + token + "'"));
      }
    }
    if (values.empty()) {
      throw DataError(LocatedMessage(path.string(), line_no, "word without a vector"));
    }
    if (dim && *dim != values.size()) {
      throw DataError(LocatedMessage(
          path.string(), line_no,
          "vector dimension " + std::to_string(values.size()) + " differs from " +
              std::to_string(*dim)));
    }
    dim = values.size();
    vectors[word] = std::move(values);
  }
  return FromMap(std::move(vectors));
}

PretrainedTable PretrainedTable::FromMap(std::map<std::string, std::vector<double>> vectors) {
  PretrainedTable table;
  if (!vectors.empty()) table.dim_ = vectors.begin()->second.size();
  for (const auto &[word, v] : vectors) {
    if (v.size() != table.dim_) throw DataError("inconsistent pretrained vector dimensions");
  }
  table.vectors_ = std::move(vectors);
  return table;
}

VectorXd PretrainedTable::Lookup(std::string_view word) const {
  auto it = vectors_.find(std::string(word));
  if (it == vectors_.end()) return VectorXd::Zero(static_cast<Eigen::Index>(dim_));
  return Eigen::Map<const VectorXd>(it->second.data(),
                                    static_cast<Eigen::Index>(it->second.size()));
}

// ---------------------------------------------------------------------------
// Vocabulary

Vocabulary::Vocabulary() {
  Add("<pad>");
  Add("<unk>");
}

void Vocabulary::Add(const std::string &key) {
  if (index_.emplace(key, static_cast<int32_t>(keys_.size())).second) {
    keys_.push_back(key);
  }
}

std::string Vocabulary::WordKey(std::string_view word) {
  return "w:" + std::string(word);
}

std::string Vocabulary::EntityKey(std::string_view entity) {
  return "e:" + std::string(entity);
}

Vocabulary Vocabulary::Build(
    const std::vector<std::pair<LinkedUtterance, LinkedUtterance>> &pairs) {
  Vocabulary vocab;
  auto add_utterance = [&vocab](const LinkedUtterance &u) {
    size_t link = 0;
    const std::vector<std::string> &tokens = u.utterance.tokens;
    for (size_t t = 0; t < tokens.size();) {
      if (link < u.links.size() && u.links[link].span.start == t) {
        vocab.Add(EntityKey(u.links[link].entity));
        t = u.links[link].span.end;
        ++link;
      } else {
        vocab.Add(WordKey(tokens[t]));
        ++t;
      }
    }
  };
  for (const auto &[question, answer] : pairs) {
    add_utterance(question);
    add_utterance(answer);
    vocab.max_question_entities_ =
        std::max(vocab.max_question_entities_, question.links.size());
  }
  return vocab;
}

Vocabulary Vocabulary::FromKeys(std::vector<std::string> keys,
                                size_t max_question_entities) {
  if (keys.size() < 2 || keys[kPad] != "<pad>" || keys[kUnk] != "<unk>") {
    throw DataError("vocabulary must start with the reserved <pad> and <unk> keys");
  }
  Vocabulary vocab;
  for (const std::string &key : keys) vocab.Add(key);
  if (vocab.size() != keys.size()) throw DataError("vocabulary contains duplicate keys");
  vocab.max_question_entities_ = max_question_entities;
  return vocab;
}

int32_t Vocabulary::Index(const std::string &key) const {
  auto it = index_.find(key);
  return it == index_.end() ? kUnk : it->second;
}

// ---------------------------------------------------------------------------
// Encoding

EncodedSequence EncodePair(const Vocabulary &vocab, const LinkedUtterance &question,
                           const LinkedUtterance &answer,
                           const std::optional<std::string> &gold) {
  EncodedSequence seq;
  auto append = [&](const LinkedUtterance &u, bool is_answer) {
    size_t link = 0;
    const std::vector<std::string> &tokens = u.utterance.tokens;
    for (size_t t = 0; t < tokens.size();) {
      if (link < u.links.size() && u.links[link].span.start == t) {
        const std::string &entity = u.links[link].entity;
        seq.tokens.push_back(vocab.Index(Vocabulary::EntityKey(entity)));
        seq.words.emplace_back();
        seq.entities.push_back(entity);
        int32_t slot = vocab.zero_slot();
        if (is_answer) {
          slot = vocab.null_slot();
          for (size_t k = 0; k < question.links.size(); ++k) {
            if (question.links[k].entity == entity) {
              if (k < vocab.max_question_entities()) slot = static_cast<int32_t>(k);
              break;
            }
          }
          if (gold && !seq.gold_position && entity == *gold) {
            seq.gold_position = seq.tokens.size() - 1;
          }
        }
        seq.positions.push_back(slot);
        seq.answer_entity_mask.push_back(is_answer);
        t = u.links[link].span.end;
        ++link;
      } else {
        seq.tokens.push_back(vocab.Index(Vocabulary::WordKey(tokens[t])));
        seq.words.push_back(tokens[t]);
        seq.entities.emplace_back();
        seq.positions.push_back(vocab.zero_slot());
        seq.answer_entity_mask.push_back(false);
        ++t;
      }
    }
  };
  append(question, false);
  append(answer, true);
  if (gold && !seq.gold_position) {
    throw std::invalid_argument("gold entity '" + *gold + "' is not linked in the answer");
  }
  return seq;
}

// ---------------------------------------------------------------------------
// Parameters

std::vector<MatrixXd *> Parameters::Tensors() {
  return {&embedding,        &forward.input,     &forward.recurrent, &forward.bias,
          &backward.input,   &backward.recurrent, &backward.bias,    &output};
}

std::vector<const MatrixXd *> Parameters::Tensors() const {
  return {&embedding,        &forward.input,     &forward.recurrent, &forward.bias,
          &backward.input,   &backward.recurrent, &backward.bias,    &output};
}

const std::vector<std::string> &Parameters::TensorNames() {
  static const std::vector<std::string> names = {
      "embedding",      "forward.input",      "forward.recurrent", "forward.bias",
      "backward.input", "backward.recurrent", "backward.bias",     "output"};
  return names;
}

Parameters Parameters::ZerosLike() const {
  Parameters zeros = *this;
  for (MatrixXd *t : zeros.Tensors()) t->setZero();
  return zeros;
}

// ---------------------------------------------------------------------------
// NeuralModel

NeuralModel::NeuralModel(Vocabulary vocab, ModelFlags flags,
                         std::optional<PretrainedTable> pretrained, uint64_t seed)
    : vocab_(std::move(vocab)), flags_(flags), pretrained_(std::move(pretrained)) {
  std::mt19937_64 rng(seed);
  const auto d = static_cast<Eigen::Index>(input_dim());
  params_.embedding = MatrixXd(kEmbeddingDim, static_cast<Eigen::Index>(vocab_.size()));
  FillUniform(params_.embedding, rng);
  params_.forward = InitLstm(d, rng);
  params_.backward = InitLstm(d, rng);
  params_.output = MatrixXd(2 * H, 1);
  FillUniform(params_.output, rng);
}

size_t NeuralModel::pretrained_dim() const {
  return pretrained_ ? pretrained_->dim() : kPretrainedDim;
}

size_t NeuralModel::input_dim() const {
  return kEmbeddingDim + pretrained_dim() +
         (flags_.use_positional_features ? vocab_.positional_width() : 0);
}

MatrixXd NeuralModel::Inputs(const EncodedSequence &seq) const {
  if (seq.size() == 0) throw std::invalid_argument("empty sequence");
  const auto steps = static_cast<Eigen::Index>(seq.size());
  const auto pdim = static_cast<Eigen::Index>(pretrained_dim());
  MatrixXd x = MatrixXd::Zero(static_cast<Eigen::Index>(input_dim()), steps);
  for (Eigen::Index t = 0; t < steps; ++t) {
    const int32_t token = seq.tokens[static_cast<size_t>(t)];
    if (token < 0 || static_cast<size_t>(token) >= vocab_.size()) {
      throw std::invalid_argument("token index outside the vocabulary");
    }
    x.block(0, t, kEmbeddingDim, 1) = params_.embedding.col(token);
    const std::string &word = seq.words[static_cast<size_t>(t)];
    if (flags_.use_pretrained && pretrained_ && !word.empty()) {
      x.block(kEmbeddingDim, t, pdim, 1) = pretrained_->Lookup(word);
    }
    if (flags_.use_positional_features) {
      const int32_t slot = seq.positions[static_cast<size_t>(t)];
      if (slot < 0 || static_cast<size_t>(slot) >= vocab_.positional_width()) {
        throw std::invalid_argument("positional slot outside the feature width");
      }
      x(kEmbeddingDim + pdim + slot, t) = 1.0;
    }
  }
  return x;
}

VectorXd NeuralModel::Forward(const EncodedSequence &seq) const {
  const MatrixXd x = Inputs(seq);
  const LstmTrace fwd = RunLstm(params_.forward, x, false);
  const LstmTrace bwd = RunLstm(params_.backward, x, true);
  VectorXd logits = fwd.hidden.transpose() * params_.output.block(0, 0, H, 1) +
                    bwd.hidden.transpose() * params_.output.block(H, 0, H, 1);
  return Softmax(logits);
}

Parameters NeuralModel::Backward(const EncodedSequence &seq, size_t gold_position,
                                 double *loss) const {
  if (gold_position >= seq.size()) throw std::invalid_argument("gold position out of range");
  const MatrixXd x = Inputs(seq);
  const LstmTrace fwd = RunLstm(params_.forward, x, false);
  const LstmTrace bwd = RunLstm(params_.backward, x, true);
  const auto w_fwd = params_.output.block(0, 0, H, 1);
  const auto w_bwd = params_.output.block(H, 0, H, 1);
  VectorXd logits = fwd.hidden.transpose() * w_fwd + bwd.hidden.transpose() * w_bwd;
  VectorXd d = Softmax(logits);
  if (loss != nullptr) *loss = CrossEntropy(d, gold_position);

  VectorXd d_logits = d;
  d_logits(static_cast<Eigen::Index>(gold_position)) -= 1.0;

  Parameters grad = params_.ZerosLike();
  grad.output.block(0, 0, H, 1) = fwd.hidden * d_logits;
  grad.output.block(H, 0, H, 1) = bwd.hidden * d_logits;

  MatrixXd d_inputs = MatrixXd::Zero(x.rows(), x.cols());
  BackpropLstm(params_.forward, fwd, x, w_fwd * d_logits.transpose(), grad.forward, d_inputs);
  BackpropLstm(params_.backward, bwd, x, w_bwd * d_logits.transpose(), grad.backward,
               d_inputs);
  for (size_t t = 0; t < seq.size(); ++t) {
    grad.embedding.col(seq.tokens[t]) +=
        d_inputs.block(0, static_cast<Eigen::Index>(t), kEmbeddingDim, 1);
  }
  return grad;
}

size_t MaskedArgmax(const VectorXd &probabilities, const std::vector<bool> &mask) {
  if (mask.size() != static_cast<size_t>(probabilities.size())) {
    throw std::invalid_argument("mask and distribution differ in length");
  }
  std::optional<size_t> best;
  for (size_t t = 0; t < mask.size(); ++t) {
    if (!mask[t]) continue;
    if (!best || probabilities(static_cast<Eigen::Index>(t)) >
                     probabilities(static_cast<Eigen::Index>(*best))) {
      best = t;
    }
  }
  if (!best) throw std::invalid_argument("sequence has no answer entity to choose");
  return *best;
}

Prediction NeuralModel::Predict(const EncodedSequence &seq) const {
  VectorXd d = Forward(seq);
  size_t best = MaskedArgmax(d, seq.answer_entity_mask);
  return {best, seq.entities[best], d(static_cast<Eigen::Index>(best))};
}

std::string NeuralModel::Serialize() const {
  json j;
  j["format"] = kCheckpointFormat;
  j["flags"] = {{"use_positional_features", flags_.use_positional_features},
                {"use_pretrained", flags_.use_pretrained}};
  j["embedding_dim"] = kEmbeddingDim;
  j["hidden_units"] = kHiddenUnits;
  j["max_question_entities"] = vocab_.max_question_entities();
  j["vocabulary"] = vocab_.keys();
  if (pretrained_) {
    j["pretrained"] = {{"dim", pretrained_->dim()}, {"vectors", pretrained_->vectors()}};
  } else {
    j["pretrained"] = nullptr;
  }
  const std::vector<std::string> &names = Parameters::TensorNames();
  const std::vector<const MatrixXd *> tensors = params_.Tensors();
  json t = json::object();
  for (size_t i = 0; i < names.size(); ++i) t[names[i]] = TensorToJson(*tensors[i]);
  j["tensors"] = std::move(t);
  return j.dump() + "\n";
}

NeuralModel NeuralModel::Deserialize(const std::string &text) {
  try {
    json j = json::parse(text);
    if (j.at("format").get<std::string>() != kCheckpointFormat) {
      throw DataError("unsupported checkpoint format");
    }
    if (j.at("embedding_dim").get<size_t>() != kEmbeddingDim ||
        j.at("hidden_units").get<size_t>() != kHiddenUnits) {
      throw DataError("checkpoint layer sizes do not match this build");
    }
    ModelFlags flags{j.at("flags").at("use_positional_features").get<bool>(),
                     j.at("flags").at("use_pretrained").get<bool>()};
    Vocabulary vocab = Vocabulary::FromKeys(j.at("vocabulary").get<std::vector<std::string>>(),
                                            j.at("max_question_entities").get<size_t>());
    std::optional<PretrainedTable> pretrained;
    if (!j.at("pretrained").is_null()) {
      pretrained = PretrainedTable::FromMap(
          j["pretrained"].at("vectors").get<std::map<std::string, std::vector<double>>>());
    }
    NeuralModel model(std::move(vocab), flags, std::move(pretrained), 0);
    const std::vector<std::string> &names = Parameters::TensorNames();
    std::vector<MatrixXd *> tensors = model.params_.Tensors();
    for (size_t i = 0; i < names.size(); ++i) {
      *tensors[i] = TensorFromJson(j.at("tensors").at(names[i]), tensors[i]->rows(),
                                   tensors[i]->cols(), names[i]);
    }
    return model;
  } catch (const json::exception &e) {
    throw DataError(std::string("malformed checkpoint: ") + e.what());
  }
}

void NeuralModel::Save(const std::filesystem::path &path) const {
  std::ofstream out = OpenOutput(path);
  out << Serialize();
  if (!out) throw DataError("failed writing '" + path.string() + "'");
}

NeuralModel NeuralModel::Load(const std::filesystem::path &path) {
  return Deserialize(ReadFile(path));
}

double CrossEntropy(const VectorXd &probabilities, size_t gold_position) {
  if (gold_position >= static_cast<size_t>(probabilities.size())) {
    throw std::invalid_argument("gold position out of range");
  }
  return -std::log(std::max(probabilities(static_cast<Eigen::Index>(gold_position)), 1e-12));
}

// ---------------------------------------------------------------------------
// Training

double ArgmaxAccuracy(const NeuralModel &model, const std::vector<EncodedSequence> &data) {
  if (data.empty()) return 0.0;
  size_t correct = 0;
  for (const EncodedSequence &seq : data) {
    if (!seq.gold_position) continue;
    if (model.Predict(seq).entity == seq.entities[*seq.gold_position]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(data.size());
}

TrainingResult TrainModel(const Vocabulary &vocab,
                          std::optional<PretrainedTable> pretrained,
                          const std::vector<EncodedSequence> &train,
                          const std::vector<EncodedSequence> &val,
                          const TrainingConfig &config) {
  if (config.epochs < 1) throw std::invalid_argument("epochs must be at least 1");
  if (train.empty()) throw std::invalid_argument("empty training set");
  for (const EncodedSequence &seq : train) {
    if (!seq.gold_position) {
      throw std::invalid_argument("training sequence without a gold position");
    }
  }

  TrainingResult result{NeuralModel(vocab, config.flags, std::move(pretrained), config.seed),
                        {}, 0};
  NeuralModel &model = result.model;
  AdamOptimizer optimizer(config.adam);
  std::mt19937_64 shuffle_rng(config.seed ^ 0x9E3779B97F4A7C15ULL);

  std::vector<size_t> order(train.size());
  std::optional<Parameters> best;
  double best_accuracy = -1.0;
  for (size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), 0);
    for (size_t i = order.size(); i > 1; --i) {
      std::swap(order[i - 1], order[shuffle_rng() % i]);
    }
    double total_loss = 0.0;
    for (size_t idx : order) {
      double loss = 0.0;
      Parameters grad = model.Backward(train[idx], *train[idx].gold_position, &loss);
      optimizer.Step(model.params().Tensors(), std::as_const(grad).Tensors());
      total_loss += loss;
    }
    EpochLog entry;
    entry.epoch = epoch;
    entry.mean_loss = total_loss / static_cast<double>(train.size());
    entry.train_accuracy = ArgmaxAccuracy(model, train);
    entry.val_accuracy = val.empty() ? entry.train_accuracy : ArgmaxAccuracy(model, val);
    result.log.push_back(entry);
    if (entry.val_accuracy > best_accuracy) {
      best_accuracy = entry.val_accuracy;
      best = model.params();
      result.best_epoch = epoch;
    }
  }
  model.params() = std::move(*best);
  return result;
}

}  // namespace denotation
