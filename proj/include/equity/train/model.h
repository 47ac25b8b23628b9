// Copyright 2026 The Equity Audit Authors
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

#ifndef EQUITY_TRAIN_MODEL_H_
#define EQUITY_TRAIN_MODEL_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"

namespace equity::train {

struct ModelShape {
  std::size_t vocab = 4096;  // hashing buckets
  std::size_t dim = 64;
};

// Forward pass of one text, kept for the backward pass.
struct Encoding {
  // (bucket, count / token count) for every distinct bucket.
  std::vector<std::pair<std::size_t, double>> buckets;
  std::vector<double> pooled;     // mean of the bucket rows
  std::vector<double> projected;  // P * pooled
  double norm = 0.0;              // |projected|
  std::vector<double> unit;       // projected / norm
};

// Hashed bag-of-words encoder: lowercased word tokens are hashed into
// `vocab` buckets, their rows of E (vocab x dim) are averaged, projected by
// P (dim x dim) and L2-normalized. Parameters live in one contiguous buffer
// laid out as [E | P], both row-major.
class EmbeddingModel {
 public:
  EmbeddingModel(ModelShape shape, std::uint64_t seed);

  const ModelShape& shape() const { return shape_; }
  std::uint64_t seed() const { return seed_; }

  std::span<double> params() { return params_; }
  std::span<const double> params() const { return params_; }
  std::size_t embedding_size() const { return shape_.vocab * shape_.dim; }
  std::size_t projection_size() const { return shape_.dim * shape_.dim; }

  // Rescales each row of E to unit length; zero rows are left alone.
  void NormalizeRows();

  static std::size_t Bucket(std::string_view token, std::size_t vocab);

  // Throws ContractError for text without word tokens and NumericError when
  // the projection collapses to zero.
  Encoding Encode(std::string_view text) const;
  std::vector<double> Embed(std::string_view text) const {
    return Encode(text).unit;
  }

  // Adds dLoss/dparams to `grad` given dLoss/dunit for one encoding.
  void Backward(const Encoding& encoding, std::span<const double> grad_unit,
                std::span<double> grad) const;

  nlohmann::ordered_json ToJson() const;
  static EmbeddingModel FromJson(const nlohmann::ordered_json& doc);
  void Save(const std::filesystem::path& path,
            const nlohmann::ordered_json& config) const;
  static EmbeddingModel Load(const std::filesystem::path& path);

 private:
  ModelShape shape_;
  std::uint64_t seed_;
  std::vector<double> params_;
};

// 1 - <u, v>. Throws ContractError when either input is off the unit sphere
// by more than 1e-6.
double CosineDistance(std::span<const double> u, std::span<const double> v);

}  // namespace equity::train

#endif  // EQUITY_TRAIN_MODEL_H_
