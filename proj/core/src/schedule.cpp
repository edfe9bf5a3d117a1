#include "saft/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>

#include "saft/error.hpp"

namespace saft {

namespace {

// Geometric steps like 16 * 2^i come out of exp/log a few ulps off; snap them.
double snap(double v) {
  const double r = std::round(v);
  return std::abs(v - r) <= 1e-9 * std::max(1.0, std::abs(v)) ? r : v;
}

void check_args(double start, double stop, int count) {
  if (count < 1) throw Error(ErrorCode::InvalidArgument, "schedule count must be >= 1");
  if (!(start > 0.0) || !std::isfinite(start) || !std::isfinite(stop))
    throw Error(ErrorCode::InvalidArgument, "schedule start must be positive and finite");
  if (count == 1 ? stop != start : !(stop > start))
    throw Error(ErrorCode::InvalidArgument, "schedule stop must exceed start");
}

}  // namespace

Schedule::Schedule(std::vector<double> sizes) : sizes_(std::move(sizes)) {
  if (sizes_.empty()) throw Error(ErrorCode::InvalidArgument, "empty schedule");
  for (std::size_t i = 0; i < sizes_.size(); ++i) {
    if (!(sizes_[i] > 0.0) || !std::isfinite(sizes_[i]))
      throw Error(ErrorCode::InvalidArgument, "schedule sizes must be positive and finite");
    if (i > 0 && !(sizes_[i] > sizes_[i - 1]))
      throw Error(ErrorCode::InvalidArgument, "schedule must be strictly increasing");
  }
}

Schedule Schedule::geometric(double start, double stop, int count) {
  check_args(start, stop, count);
  std::vector<double> s;
  s.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    if (i == count - 1) {
      s.push_back(stop);
    } else {
      const double t = static_cast<double>(i) / static_cast<double>(count - 1);
      s.push_back(snap(start * std::exp(t * std::log(stop / start))));
    }
  }
  return Schedule(std::move(s));
}

Schedule Schedule::linear(double start, double stop, int count) {
  check_args(start, stop, count);
  std::vector<double> s;
  s.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    if (i == count - 1) {
      s.push_back(stop);
    } else {
      const double t = static_cast<double>(i) / static_cast<double>(count - 1);
      s.push_back(snap(start + t * (stop - start)));
    }
  }
  return Schedule(std::move(s));
}

Schedule Schedule::parse(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos)
    throw Error(ErrorCode::InvalidArgument, "schedule must look like geo:start,stop,count");
  const std::string kind(text.substr(0, colon));
  const std::string rest(text.substr(colon + 1));

  double vals[3];
  std::size_t pos = 0;
  for (int i = 0; i < 3; ++i) {
    const auto comma = rest.find(',', pos);
    const bool last = i == 2;
    if (last != (comma == std::string::npos))
      throw Error(ErrorCode::InvalidArgument, "schedule needs exactly three comma-separated values");
    const std::string field = rest.substr(pos, last ? std::string::npos : comma - pos);
    char* end = nullptr;
    vals[i] = std::strtod(field.c_str(), &end);
    if (field.empty() || end != field.c_str() + field.size())
      throw Error(ErrorCode::InvalidArgument, "bad schedule value '" + field + "'");
    pos = comma + 1;
  }
  if (vals[2] != std::floor(vals[2])) throw Error(ErrorCode::InvalidArgument, "schedule count must be an integer");
  const int count = static_cast<int>(vals[2]);
  if (kind == "geo") return geometric(vals[0], vals[1], count);
  if (kind == "lin") return linear(vals[0], vals[1], count);
  throw Error(ErrorCode::InvalidArgument, "unknown schedule kind '" + kind + "'");
}

}  // namespace saft
