#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace swe {

struct EdgeTag {};
struct CellTag {};
struct DualTag {};

/// One scalar per mesh entity of kind `Tag`.
///
/// Edge values are stored in the edge's canonical orientation (normal
/// pointing from the edge's first cell to its second cell). The tag keeps
/// cell, edge and dual-cell arrays from being mixed up at call sites.
template <class Tag>
class Field {
public:
  Field() = default;
  explicit Field(std::size_t n, double value = 0.0) : values_(n, value) {}
  explicit Field(std::vector<double> values) : values_(std::move(values)) {}

  [[nodiscard]] std::size_t size() const { return values_.size(); }
  [[nodiscard]] bool empty() const { return values_.empty(); }
  [[nodiscard]] double *data() { return values_.data(); }
  [[nodiscard]] const double *data() const { return values_.data(); }
  double &operator[](std::size_t i) { return values_[i]; }
  double operator[](std::size_t i) const { return values_[i]; }

  [[nodiscard]] std::span<const double> view() const { return values_; }
  [[nodiscard]] std::span<double> view() { return values_; }
  [[nodiscard]] const std::vector<double> &raw() const { return values_; }
  std::vector<double> &raw() { return values_; }

  auto begin() { return values_.begin(); }
  auto end() { return values_.end(); }
  auto begin() const { return values_.begin(); }
  auto end() const { return values_.end(); }

  Field &operator+=(const Field &o) {
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += o.values_[i];
    return *this;
  }
  Field &operator-=(const Field &o) {
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= o.values_[i];
    return *this;
  }
  Field &operator*=(double s) {
    for (double &v : values_) v *= s;
    return *this;
  }
  friend Field operator+(Field a, const Field &b) { return a += b; }
  friend Field operator-(Field a, const Field &b) { return a -= b; }
  friend Field operator*(double s, Field a) { return a *= s; }
  friend Field operator*(Field a, double s) { return a *= s; }

  /// this += s * x
  void axpy(double s, const Field &x) {
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += s * x.values_[i];
  }

  bool operator==(const Field &) const = default;

private:
  std::vector<double> values_;
};

using EdgeField = Field<EdgeTag>;
using CellField = Field<CellTag>;
using DualField = Field<DualTag>;

} // namespace swe
