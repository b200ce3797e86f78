#ifndef LEXADAPT_EMBEDDING_STORE_HPP_
#define LEXADAPT_EMBEDDING_STORE_HPP_

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "lexadapt/error.hpp"
#include "lexadapt/text_io.hpp"

namespace lexadapt {

enum class DomainTag { kTarget, kSource, kBridge };

inline std::string to_string(DomainTag t) {
  switch (t) {
    case DomainTag::kTarget: return "target";
    case DomainTag::kSource: return "source";
    case DomainTag::kBridge: return "bridge";
  }
  return "target";
}

enum class EmbeddingFormat { kText, kBinary };

// Two cosines closer than this are treated as tied; ties go to the
// lexicographically smaller word.
inline constexpr double kCosineTieTolerance = 1e-12;

// Immutable word -> unit vector table for one domain. Zero vectors are
// dropped at load time and remembered in skipped().
class EmbeddingSpace {
 public:
  EmbeddingSpace(DomainTag tag, std::size_t dimension) : tag_(tag), dim_(dimension) {
    if (dimension == 0) throw ContractError("embedding dimension must be positive");
  }

  // Returns false (and records the word as skipped) for a zero vector.
  bool add(std::string word, std::span<const double> vec) {
    if (vec.size() != dim_)
      throw ContractError("vector for '" + word + "' has length " + std::to_string(vec.size()) +
                          ", expected " + std::to_string(dim_));
    if (index_.contains(word) || skipped_set_.contains(word))
      throw ContractError("duplicate word '" + word + "' in " + to_string(tag_) + " space");
    double norm2 = 0.0;
    for (double v : vec) {
      if (!std::isfinite(v)) throw ContractError("non-finite component in vector for '" + word + "'");
      norm2 += v * v;
    }
    if (norm2 == 0.0) {
      skipped_.push_back(word);
      skipped_set_.insert(std::move(word));
      return false;
    }
    const double norm = std::sqrt(norm2);
    for (double v : vec) data_.push_back(v / norm);
    index_.emplace(word, words_.size());
    words_.push_back(std::move(word));
    return true;
  }

  DomainTag domain_tag() const { return tag_; }
  std::string domain_name() const { return to_string(tag_); }
  std::size_t dimension() const { return dim_; }
  std::size_t size() const { return words_.size(); }
  const std::vector<std::string>& words() const { return words_; }
  const std::vector<std::string>& skipped() const { return skipped_; }

  bool contains(std::string_view w) const { return index_.contains(std::string(w)); }

  std::span<const double> unit_vector(std::string_view w) const {
    return {data_.data() + row_of(w) * dim_, dim_};
  }

  // Cosine similarity, clamped to [-1, 1]. Symmetric bit-for-bit.
  double cosine(std::string_view u, std::string_view v) const {
    return dot_rows(row_of(u), row_of(v));
  }

  // Exhaustive argmax of cosine(w, v) over v != w. When `candidates` is
  // given, only those words are considered. Returns nullopt when no
  // candidate exists.
  std::optional<std::string> most_similar(
      std::string_view w, const std::unordered_set<std::string>* candidates = nullptr) const {
    const std::size_t self = row_of(w);
    std::optional<std::size_t> best;
    double best_score = 0.0;
    for (std::size_t r = 0; r < words_.size(); ++r) {
      if (r == self) continue;
      if (candidates && !candidates->contains(words_[r])) continue;
      const double score = dot_rows(self, r);
      const bool take = !best || score > best_score + kCosineTieTolerance ||
                        (score >= best_score - kCosineTieTolerance && words_[r] < words_[*best]);
      if (take) {
        best = r;
        best_score = score;
      }
    }
    if (!best) {
      if (!skipped_.empty() && words_.size() == 1)
        throw DegenerateVectorError(skipped_.front(), domain_name());
      return std::nullopt;
    }
    return words_[*best];
  }

 private:
  std::size_t row_of(std::string_view w) const {
    auto it = index_.find(std::string(w));
    if (it == index_.end()) {
      if (skipped_set_.contains(std::string(w))) throw DegenerateVectorError(std::string(w), domain_name());
      throw OovError(std::string(w), domain_name());
    }
    return it->second;
  }

  double dot_rows(std::size_t a, std::size_t b) const {
    // Order operands by row so cosine(u, v) and cosine(v, u) sum identically.
    if (a > b) std::swap(a, b);
    const double* x = data_.data() + a * dim_;
    const double* y = data_.data() + b * dim_;
    double s = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) s += x[i] * y[i];
    return std::clamp(s, -1.0, 1.0);
  }

  DomainTag tag_;
  std::size_t dim_;
  std::vector<std::string> words_;
  std::vector<double> data_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<std::string> skipped_;
  std::unordered_set<std::string> skipped_set_;
};

namespace detail {

inline double parse_component(std::string_view tok, const std::string& source, std::size_t line) {
  double v = 0.0;
  const char* first = tok.data();
  if (!tok.empty() && tok.front() == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size())
    throw ParseError(source, line, "malformed number '" + std::string(tok) + "'");
  if (!std::isfinite(v)) throw ParseError(source, line, "non-finite value '" + std::string(tok) + "'");
  return v;
}

inline std::pair<std::size_t, std::size_t> parse_header(std::string_view line, const std::string& source) {
  auto parts = text::split_whitespace(line);
  std::size_t count = 0, dim = 0;
  auto to_size = [&](std::string_view t, std::size_t& out) {
    auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), out);
    return ec == std::errc() && p == t.data() + t.size();
  };
  if (parts.size() != 2 || !to_size(parts[0], count) || !to_size(parts[1], dim) || dim == 0)
    throw ParseError(source, 1, "malformed header, expected '<word_count> <dimension>'");
  return {count, dim};
}

}  // namespace detail

// Text format: "<count> <dim>" header, then "<word> <v1> ... <vd>" rows.
inline EmbeddingSpace parse_text_embeddings(std::string_view contents, DomainTag tag,
                                            const std::string& source = "<embeddings>") {
  text::validate_utf8(contents);
  auto lines = text::split_lines(contents);
  if (lines.empty()) throw ParseError(source, 1, "empty embedding file");
  auto [count, dim] = detail::parse_header(lines[0], source);
  EmbeddingSpace space(tag, dim);
  std::vector<double> vec(dim);
  std::size_t rows = 0;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::size_t lineno = i + 1;
    if (text::trim(lines[i]).empty()) continue;
    auto parts = text::split_whitespace(lines[i]);
    if (parts.size() - 1 != dim)
      throw ParseError(source, lineno,
                       "row has " + std::to_string(parts.size() - 1) + " components, expected " +
                           std::to_string(dim));
    for (std::size_t d = 0; d < dim; ++d) vec[d] = detail::parse_component(parts[d + 1], source, lineno);
    try {
      space.add(std::string(parts[0]), vec);
    } catch (const ContractError& e) {
      throw ParseError(source, lineno, e.what());
    }
    ++rows;
  }
  if (rows != count)
    throw ParseError(source, lines.size(),
                     "header declares " + std::to_string(count) + " words, found " + std::to_string(rows));
  if (space.size() == 0) throw ParseError(source, 1, "no usable (non-zero) vectors");
  return space;
}

// Classic word2vec binary layout: text header line, then per row
// "<word> " followed by dim little-endian float32 values and an optional LF.
inline EmbeddingSpace parse_binary_embeddings(std::string_view contents, DomainTag tag,
                                              const std::string& source = "<embeddings>") {
  std::size_t nl = contents.find('\n');
  if (nl == std::string_view::npos) throw ParseError(source, 1, "missing header line");
  auto [count, dim] = detail::parse_header(contents.substr(0, nl), source);
  EmbeddingSpace space(tag, dim);
  std::size_t pos = nl + 1;
  std::vector<double> vec(dim);
  for (std::size_t row = 0; row < count; ++row) {
    const std::size_t lineno = row + 2;
    while (pos < contents.size() && contents[pos] == '\n') ++pos;
    std::size_t sp = contents.find(' ', pos);
    if (sp == std::string_view::npos) throw ParseError(source, lineno, "truncated row (word)");
    std::string word(contents.substr(pos, sp - pos));
    text::validate_utf8(word);
    pos = sp + 1;
    if (pos + 4 * dim > contents.size()) throw ParseError(source, lineno, "truncated row (vector)");
    for (std::size_t d = 0; d < dim; ++d) {
      unsigned char b[4];
      std::memcpy(b, contents.data() + pos + 4 * d, 4);
      std::uint32_t bits = std::uint32_t(b[0]) | (std::uint32_t(b[1]) << 8) | (std::uint32_t(b[2]) << 16) |
                           (std::uint32_t(b[3]) << 24);
      float f;
      std::memcpy(&f, &bits, 4);
      if (!std::isfinite(f)) throw ParseError(source, lineno, "non-finite value");
      vec[d] = f;
    }
    pos += 4 * dim;
    try {
      space.add(std::move(word), vec);
    } catch (const ContractError& e) {
      throw ParseError(source, lineno, e.what());
    }
  }
  if (space.size() == 0) throw ParseError(source, 1, "no usable (non-zero) vectors");
  return space;
}

inline EmbeddingSpace load_embeddings(const std::filesystem::path& path, EmbeddingFormat format,
                                      DomainTag tag) {
  auto contents = text::read_file(path);
  return format == EmbeddingFormat::kText ? parse_text_embeddings(contents, tag, path.string())
                                          : parse_binary_embeddings(contents, tag, path.string());
}

}  // namespace lexadapt

#endif  // LEXADAPT_EMBEDDING_STORE_HPP_
