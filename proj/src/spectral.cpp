#include "thra/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <sstream>
#include <utility>

#include "thra/errors.hpp"

namespace thra {

namespace {

std::string range_text(const SpectralCurve& c) {
  char buf[96];
  std::snprintf(buf, sizeof(buf), "[%g, %g] nm", c.min_wavelength_nm(), c.max_wavelength_nm());
  return buf;
}

// Overlap interval of a set of curves; throws when empty or degenerate.
std::pair<double, double> overlap_interval(std::span<const SpectralCurve> curves) {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  for (const auto& c : curves) {
    lo = std::max(lo, c.min_wavelength_nm());
    hi = std::min(hi, c.max_wavelength_nm());
  }
  if (!(lo < hi)) {
    std::ostringstream msg;
    msg << "spectral grids do not overlap:";
    for (const auto& c : curves) {
      msg << ' ' << (c.label().empty() ? "<unlabeled>" : c.label()) << ' ' << range_text(c);
    }
    throw NoOverlapError(msg.str());
  }
  return {lo, hi};
}

} // namespace

SpectralCurve::SpectralCurve(std::vector<double> wavelengths_nm, std::vector<double> values_db,
                             std::string label, bool passive)
    : wavelengths_nm_(std::move(wavelengths_nm)),
      values_db_(std::move(values_db)),
      label_(std::move(label)),
      passive_(passive) {
  if (wavelengths_nm_.size() != values_db_.size()) {
    throw InvalidCurveError("curve '" + label_ + "': wavelength/value lengths differ");
  }
  if (wavelengths_nm_.size() < 2) {
    throw TooFewPointsError("curve '" + label_ + "': needs at least 2 points, got " +
                            std::to_string(wavelengths_nm_.size()));
  }
  for (std::size_t i = 0; i < wavelengths_nm_.size(); ++i) {
    if (!std::isfinite(wavelengths_nm_[i]) || !std::isfinite(values_db_[i])) {
      throw InvalidCurveError("curve '" + label_ + "': non-finite sample at index " +
                              std::to_string(i));
    }
    if (i > 0 && !(wavelengths_nm_[i] > wavelengths_nm_[i - 1])) {
      throw InvalidCurveError("curve '" + label_ + "': wavelengths not strictly increasing at index " +
                              std::to_string(i));
    }
    if (passive_ && values_db_[i] > 0.0) {
      throw InvalidCurveError("curve '" + label_ + "': passive curve has gain (" +
                              std::to_string(values_db_[i]) + " dB at " +
                              std::to_string(wavelengths_nm_[i]) + " nm)");
    }
  }
}

double SpectralCurve::value_at(double lambda_nm, RangePolicy policy) const {
  if (lambda_nm < min_wavelength_nm() || lambda_nm > max_wavelength_nm()) {
    if (policy == RangePolicy::clamp) {
      return lambda_nm < min_wavelength_nm() ? values_db_.front() : values_db_.back();
    }
    char buf[160];
    std::snprintf(buf, sizeof(buf), "wavelength %g nm outside curve '%s' range [%g, %g] nm",
                  lambda_nm, label_.c_str(), min_wavelength_nm(), max_wavelength_nm());
    throw OutOfRangeError(buf);
  }
  if (lambda_nm == max_wavelength_nm()) {
    return values_db_.back();
  }
  const auto it = std::upper_bound(wavelengths_nm_.begin(), wavelengths_nm_.end(), lambda_nm);
  const std::size_t hi = static_cast<std::size_t>(it - wavelengths_nm_.begin());
  const std::size_t lo = hi - 1;
  const double t = (lambda_nm - wavelengths_nm_[lo]) / (wavelengths_nm_[hi] - wavelengths_nm_[lo]);
  // t == 0 at grid points, so stored values are returned exactly.
  return values_db_[lo] + t * (values_db_[hi] - values_db_[lo]);
}

SpectralCurve normalize_to_reference(const SpectralCurve& raw, const SpectralCurve& reference) {
  const SpectralCurve pair_arr[] = {raw, reference};
  const auto [lo, hi] = overlap_interval(pair_arr);

  std::vector<double> wl;
  std::vector<double> vals;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const double l = raw.wavelengths_nm()[i];
    if (l < lo || l > hi) continue;
    wl.push_back(l);
    vals.push_back(raw.values_db()[i] - reference.value_at(l));
  }
  if (wl.size() < 2) {
    throw NoOverlapError("normalization overlap contains fewer than 2 samples of '" + raw.label() +
                         "'");
  }
  return SpectralCurve(std::move(wl), std::move(vals), raw.label() + " / " + reference.label());
}

SpectralCurve compose_serial(std::span<const SpectralCurve> curves) {
  if (curves.empty()) {
    throw DomainError("compose_serial: empty curve list");
  }
  if (curves.size() == 1) {
    return curves.front();
  }
  const auto [lo, hi] = overlap_interval(curves);

  std::vector<double> grid;
  for (const auto& c : curves) {
    for (double l : c.wavelengths_nm()) {
      if (l >= lo && l <= hi) grid.push_back(l);
    }
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  if (grid.size() < 2) {
    throw NoOverlapError("compose_serial: common grid degenerates to fewer than 2 points");
  }

  std::vector<double> vals(grid.size(), 0.0);
  bool passive = true;
  std::string label;
  for (const auto& c : curves) {
    for (std::size_t i = 0; i < grid.size(); ++i) {
      vals[i] += c.value_at(grid[i]);
    }
    passive = passive && c.passive();
    if (!label.empty()) label += " + ";
    label += c.label().empty() ? "<unlabeled>" : c.label();
  }
  return SpectralCurve(std::move(grid), std::move(vals), std::move(label), passive);
}

SpectralCurve double_pass(const SpectralCurve& forward, const SpectralCurve& reverse) {
  const SpectralCurve legs[] = {forward, reverse};
  return compose_serial(legs);
}

namespace {

bool parse_real(std::string_view field, double& out) {
  // Trim surrounding whitespace, then require the whole field to convert.
  std::size_t b = field.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return false;
  std::size_t e = field.find_last_not_of(" \t\r");
  const std::string s(field.substr(b, e - b + 1));
  char* end = nullptr;
  out = std::strtod(s.c_str(), &end);
  return end == s.c_str() + s.size() && std::isfinite(out);
}

std::string_view strip(std::string_view s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

} // namespace

SpectralCurve parse_csv(std::string_view text, std::string label, bool passive) {
  std::vector<std::pair<double, double>> rows;
  bool header_seen = false;
  std::size_t line_no = 0;
  std::size_t pos = 0;

  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.size() - pos
                                                                          : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;

    const std::string_view trimmed = strip(line);
    if (trimmed.empty() || trimmed.front() == '#') continue;

    if (!header_seen) {
      // Header is mandatory and fixed.
      std::string compact;
      for (char ch : trimmed) {
        if (ch != ' ' && ch != '\t') compact += ch;
      }
      if (compact != "wavelength_nm,value_db") {
        throw MalformedRowError("line " + std::to_string(line_no) +
                                ": expected header 'wavelength_nm,value_db'");
      }
      header_seen = true;
      continue;
    }

    const std::size_t comma = trimmed.find(',');
    if (comma == std::string_view::npos || trimmed.find(',', comma + 1) != std::string_view::npos) {
      throw MalformedRowError("line " + std::to_string(line_no) + ": expected exactly 2 fields");
    }
    double wl = 0.0;
    double val = 0.0;
    if (!parse_real(trimmed.substr(0, comma), wl) || !parse_real(trimmed.substr(comma + 1), val)) {
      throw MalformedRowError("line " + std::to_string(line_no) + ": non-numeric field in '" +
                              std::string(trimmed) + "'");
    }
    rows.emplace_back(wl, val);
  }

  if (!header_seen) {
    throw MalformedRowError("missing header line 'wavelength_nm,value_db'");
  }
  if (rows.size() < 2) {
    throw TooFewPointsError("curve '" + label + "': CSV has " + std::to_string(rows.size()) +
                            " data rows, need at least 2");
  }

  std::sort(rows.begin(), rows.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].first == rows[i - 1].first) {
      char buf[96];
      std::snprintf(buf, sizeof(buf), "duplicate wavelength %g nm", rows[i].first);
      throw DuplicateWavelengthError(buf);
    }
  }

  std::vector<double> wl;
  std::vector<double> vals;
  wl.reserve(rows.size());
  vals.reserve(rows.size());
  for (const auto& [l, v] : rows) {
    wl.push_back(l);
    vals.push_back(v);
  }
  return SpectralCurve(std::move(wl), std::move(vals), std::move(label), passive);
}

std::string emit_csv(const SpectralCurve& curve) {
  std::string out = "wavelength_nm,value_db\n";
  char buf[80];
  for (std::size_t i = 0; i < curve.size(); ++i) {
    // 15 significant digits keep the emit->parse round trip well under 1e-9
    std::snprintf(buf, sizeof(buf), "%.15g,%.15g\n", curve.wavelengths_nm()[i],
                  curve.values_db()[i]);
    out += buf;
  }
  return out;
}

} // namespace thra
