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

#include "equity/train/model.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <random>

#include "equity/core/error.h"
#include "equity/core/hash.h"
#include "equity/core/text.h"
#include "equity/simd/kernels.h"

namespace equity::train {
namespace {

constexpr const char* kFormat = "equity-embedding-v1";

double Uniform53(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

// Box-Muller on the raw engine output so the stream does not depend on the
// standard library's distribution implementation.
double StandardNormal(std::mt19937_64& gen) {
  double u1 = Uniform53(gen);
  while (u1 <= 0.0) u1 = Uniform53(gen);
  const double u2 = Uniform53(gen);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace

EmbeddingModel::EmbeddingModel(ModelShape shape, std::uint64_t seed)
    : shape_(shape), seed_(seed) {
  if (shape_.vocab == 0 || shape_.dim == 0) {
    throw ValidationError("model shape must be positive");
  }
  params_.assign(embedding_size() + projection_size(), 0.0);
  std::mt19937_64 gen(seed);
  const double scale = 1.0 / std::sqrt(static_cast<double>(shape_.dim));
  for (std::size_t i = 0; i < embedding_size(); ++i) {
    params_[i] = scale * StandardNormal(gen);
  }
  double* projection = params_.data() + embedding_size();
  for (std::size_t i = 0; i < shape_.dim; ++i) {
    projection[i * shape_.dim + i] = 1.0;
  }
}

void EmbeddingModel::NormalizeRows() {
  const std::size_t d = shape_.dim;
  for (std::size_t r = 0; r < shape_.vocab; ++r) {
    std::span<double> row(params_.data() + r * d, d);
    const double norm = std::sqrt(simd::Dot(row, row));
    if (norm > 0.0) simd::Scale(1.0 / norm, row);
  }
}

std::size_t EmbeddingModel::Bucket(std::string_view token, std::size_t vocab) {
  return static_cast<std::size_t>(Fnv1a64(token) % vocab);
}

Encoding EmbeddingModel::Encode(std::string_view text) const {
  const std::vector<std::string> tokens = WordTokens(text);
  if (tokens.empty()) throw ContractError("cannot embed text without words");
  std::map<std::size_t, std::size_t> counts;
  for (const std::string& token : tokens) ++counts[Bucket(token, shape_.vocab)];

  const std::size_t d = shape_.dim;
  Encoding enc;
  enc.pooled.assign(d, 0.0);
  const double inv = 1.0 / static_cast<double>(tokens.size());
  for (const auto& [bucket, count] : counts) {
    const double weight = static_cast<double>(count) * inv;
    enc.buckets.emplace_back(bucket, weight);
    simd::Axpy(weight, {params_.data() + bucket * d, d}, enc.pooled);
  }
  enc.projected.assign(d, 0.0);
  simd::Gemv({params_.data() + embedding_size(), d * d}, enc.pooled,
             enc.projected);
  enc.norm = std::sqrt(simd::Dot(enc.projected, enc.projected));
  if (!(enc.norm > 0.0) || !std::isfinite(enc.norm)) {
    throw NumericError("embedding of '" + std::string(text) +
                       "' has degenerate norm");
  }
  enc.unit = enc.projected;
  simd::Scale(1.0 / enc.norm, enc.unit);
  return enc;
}

void EmbeddingModel::Backward(const Encoding& enc,
                              std::span<const double> grad_unit,
                              std::span<double> grad) const {
  const std::size_t d = shape_.dim;
  // d unit / d projected = (I - u u^T) / norm
  std::vector<double> grad_projected(grad_unit.begin(), grad_unit.end());
  simd::Axpy(-simd::Dot(enc.unit, grad_unit), enc.unit, grad_projected);
  simd::Scale(1.0 / enc.norm, grad_projected);

  simd::Ger(1.0, grad_projected, enc.pooled,
            grad.subspan(embedding_size(), d * d));
  std::vector<double> grad_pooled(d, 0.0);
  simd::GemvTransposed({params_.data() + embedding_size(), d * d},
                       grad_projected, grad_pooled);
  for (const auto& [bucket, weight] : enc.buckets) {
    simd::Axpy(weight, grad_pooled, grad.subspan(bucket * d, d));
  }
}

nlohmann::ordered_json EmbeddingModel::ToJson() const {
  nlohmann::ordered_json out;
  out["format"] = kFormat;
  out["vocab"] = shape_.vocab;
  out["dim"] = shape_.dim;
  out["seed"] = seed_;
  out["embedding"] = std::vector<double>(
      params_.begin(), params_.begin() + static_cast<std::ptrdiff_t>(embedding_size()));
  out["projection"] = std::vector<double>(
      params_.begin() + static_cast<std::ptrdiff_t>(embedding_size()),
      params_.end());
  return out;
}

EmbeddingModel EmbeddingModel::FromJson(const nlohmann::ordered_json& doc) {
  if (doc.value("format", std::string()) != kFormat) {
    throw ParseError("not an embedding checkpoint");
  }
  ModelShape shape{doc.at("vocab").get<std::size_t>(),
                   doc.at("dim").get<std::size_t>()};
  EmbeddingModel model(shape, doc.at("seed").get<std::uint64_t>());
  const auto embedding = doc.at("embedding").get<std::vector<double>>();
  const auto projection = doc.at("projection").get<std::vector<double>>();
  if (embedding.size() != model.embedding_size() ||
      projection.size() != model.projection_size()) {
    throw ParseError("checkpoint tensor sizes do not match its shape");
  }
  std::copy(embedding.begin(), embedding.end(), model.params_.begin());
  std::copy(projection.begin(), projection.end(),
            model.params_.begin() +
                static_cast<std::ptrdiff_t>(model.embedding_size()));
  return model;
}

void EmbeddingModel::Save(const std::filesystem::path& path,
                          const nlohmann::ordered_json& config) const {
  nlohmann::ordered_json doc = ToJson();
  doc["config"] = config;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write " + path.string());
  out << doc.dump() << '\n';
}

EmbeddingModel EmbeddingModel::Load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path.string());
  try {
    return FromJson(nlohmann::ordered_json::parse(in));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("checkpoint " + path.string() + ": " + e.what());
  }
}

double CosineDistance(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) throw ContractError("dimension mismatch");
  for (std::span<const double> x : {u, v}) {
    if (std::abs(std::sqrt(simd::Dot(x, x)) - 1.0) > 1e-6) {
      throw ContractError("cosine distance needs unit vectors");
    }
  }
  return 1.0 - simd::Dot(u, v);
}

}  // namespace equity::train
