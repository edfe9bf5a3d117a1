#pragma once

#include <string_view>
#include <vector>

namespace saft {

/// Strictly increasing list of positive sizes (window side lengths or
/// diameter thresholds).
class Schedule {
 public:
  Schedule() = default;
  explicit Schedule(std::vector<double> sizes);  // throws InvalidArgument

  static Schedule geometric(double start, double stop, int count);
  static Schedule linear(double start, double stop, int count);

  /// "geo:start,stop,count" or "lin:start,stop,count".
  static Schedule parse(std::string_view text);

  const std::vector<double>& sizes() const noexcept { return sizes_; }
  std::size_t size() const noexcept { return sizes_.size(); }
  double front() const { return sizes_.front(); }
  double back() const { return sizes_.back(); }

 private:
  std::vector<double> sizes_;
};

}  // namespace saft
