// Copyright 2026 The unisamp Authors
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
#include "unisamp/signals.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace unisamp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Term constant(double a) { return {Term::Kind::constant, a, 0.0, 1.0}; }
Term linear(double a, double b) { return {Term::Kind::linear, a, b, 1.0}; }
Term power(double a, double b) { return {Term::Kind::power, a, b, 1.0}; }
Term gaussian(double a, double center, double width) { return {Term::Kind::gaussian, a, center, width}; }

Term scale(Term t, double s)
{
  t.a *= s;
  if (t.kind == Term::Kind::linear) {
    t.b *= s;
  }
  return t;
}

bool is_zero(const Piece & p)
{
  return std::all_of(p.terms.begin(), p.terms.end(), [](const Term & t) {
    return t.a == 0.0 && (t.kind != Term::Kind::linear || t.b == 0.0);
  });
}

double parse_number(const std::string & text)
{
  if (text == "-inf") {
    return -kInf;
  }
  if (text == "inf" || text == "+inf") {
    return kInf;
  }
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception &) {
    used = 0;
  }
  if (used == 0 || used != text.size()) {
    throw std::invalid_argument("not a number: '" + text + "'");
  }
  return v;
}

std::vector<std::string> split(const std::string & text, char sep)
{
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) {
    const auto b = item.find_first_not_of(" \t\r");
    const auto e = item.find_last_not_of(" \t\r");
    out.push_back(b == std::string::npos ? std::string{} : item.substr(b, e - b + 1));
  }
  return out;
}

}  // namespace

double Term::operator()(double u) const
{
  switch (kind) {
    case Kind::constant:
      return a;
    case Kind::linear:
      return a + b * u;
    case Kind::power:
      return a * std::pow(u, b);
    case Kind::gaussian: {
      const double z = (u - b) / c;
      return a * std::exp(-0.5 * z * z);
    }
  }
  return 0.0;
}

double Term::sup_abs(double lo, double hi) const
{
  switch (kind) {
    case Kind::constant:
      return std::abs(a);
    case Kind::linear:
      if (b == 0.0) {
        return std::abs(a);
      }
      if (std::isinf(lo) || std::isinf(hi)) {
        return kInf;
      }
      return std::max(std::abs(a + b * lo), std::abs(a + b * hi));
    case Kind::power: {
      if (a == 0.0) {
        return 0.0;
      }
      if (b == 0.0) {
        return std::abs(a);
      }
      if (b < 0.0) {
        if (lo <= 0.0 && hi >= 0.0) {
          return kInf;
        }
        const double m = std::min(std::abs(lo), std::abs(hi));
        return std::abs(a) * std::pow(m, b);
      }
      const double m = std::max(std::abs(lo), std::abs(hi));
      return std::isinf(m) ? kInf : std::abs(a) * std::pow(m, b);
    }
    case Kind::gaussian: {
      const double nearest = std::clamp(b, lo, hi);
      const double z = (nearest - b) / c;
      return std::abs(a) * std::exp(-0.5 * z * z);
    }
  }
  return kInf;
}

double Piece::operator()(double u) const
{
  double s = 0.0;
  for (const auto & t : terms) {
    s += t(u);
  }
  return s;
}

double Piece::sup_abs(double a, double b) const
{
  const double l = std::max(a, lo);
  const double h = std::min(b, hi);
  if (!(l < h)) {
    return 0.0;
  }
  double s = 0.0;
  for (const auto & t : terms) {
    s += t.sup_abs(l, h);
  }
  return s;
}

PiecewiseSignal::PiecewiseSignal(std::string name, std::vector<Piece> pieces, SignalDomain domain)
    : name_(std::move(name)), domain_(domain)
{
  if (pieces.empty()) {
    pieces.push_back({-kInf, kInf, {}});
  }
  std::sort(pieces.begin(), pieces.end(), [](const Piece & l, const Piece & r) { return l.lo < r.lo; });
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    if (!(pieces[i].lo < pieces[i].hi)) {
      throw std::invalid_argument("signal " + name_ + ": empty piece");
    }
    if (i + 1 < pieces.size() && pieces[i].hi != pieces[i + 1].lo) {
      throw std::invalid_argument("signal " + name_ + ": pieces must be contiguous");
    }
  }
  const double start = domain_ == SignalDomain::real_line ? -kInf : 0.0;
  if (pieces.front().lo < start) {
    throw std::invalid_argument("signal " + name_ + ": piece outside the domain");
  }
  if (pieces.front().lo > start) {
    pieces.insert(pieces.begin(), Piece{start, pieces.front().lo, {}});
  }
  if (pieces.back().hi < kInf) {
    pieces.push_back(Piece{pieces.back().hi, kInf, {}});
  }
  // merge adjacent zero pieces
  std::vector<Piece> merged;
  for (auto & p : pieces) {
    if (!merged.empty() && is_zero(merged.back()) && is_zero(p)) {
      merged.back().hi = p.hi;
    } else {
      merged.push_back(std::move(p));
    }
  }
  pieces_ = std::move(merged);

  for (std::size_t i = 0; i + 1 < pieces_.size(); ++i) {
    const double b = pieces_[i].hi;
    breakpoints_.push_back(b);
    const double left = pieces_[i](b);
    const double right = pieces_[i + 1](b);
    const double scale_value = std::max({1.0, std::abs(left), std::abs(right)});
    if (!(std::abs(left - right) <= 1e-12 * scale_value)) {
      discontinuities_.push_back(b);
    }
  }
  double lo = start;
  for (double d : discontinuities_) {
    continuity_.emplace_back(lo, d);
    lo = d;
  }
  continuity_.emplace_back(lo, kInf);

  const auto first = std::find_if(pieces_.begin(), pieces_.end(), [](const Piece & p) { return !is_zero(p); });
  if (first == pieces_.end()) {
    support_ = std::make_pair(0.0, 0.0);
  } else {
    const auto last = std::find_if(pieces_.rbegin(), pieces_.rend(), [](const Piece & p) { return !is_zero(p); });
    if (std::isfinite(first->lo) && std::isfinite(last->hi) &&
        !(domain_ == SignalDomain::positive_half_line && first->lo == 0.0)) {
      support_ = std::make_pair(first->lo, last->hi);
    }
  }
  sup_norm_ = sup_abs(-kInf, kInf);
}

bool PiecewiseSignal::in_domain(double x) const
{
  return domain_ == SignalDomain::real_line ? !std::isnan(x) : x > 0.0;
}

double PiecewiseSignal::operator()(double x) const
{
  if (!in_domain(x)) {
    throw std::domain_error("signal " + name_ + " evaluated outside its domain at x = " + std::to_string(x));
  }
  const auto it = std::upper_bound(pieces_.begin(), pieces_.end(), x,
    [](double v, const Piece & p) { return v < p.lo; });
  return (*std::prev(it))(x);
}

double PiecewiseSignal::sup_abs(double lo, double hi) const
{
  double s = 0.0;
  for (const auto & p : pieces_) {
    s = std::max(s, p.sup_abs(lo, hi));
  }
  return s;
}

double PiecewiseSignal::envelope(double r) const
{
  if (!(r > 0.0)) {
    return sup_norm_;
  }
  return std::max(sup_abs(-kInf, -r), sup_abs(r, kInf));
}

double PiecewiseSignal::truncation_radius(double tol) const
{
  if (support_) {
    const double r = std::max(std::abs(support_->first), std::abs(support_->second));
    if (envelope(r) < tol) {
      return r;
    }
  }
  double r = 1.0;
  for (int i = 0; i <= 60; ++i, r *= 2.0) {
    if (envelope(r) < tol) {
      return r;
    }
  }
  return kInf;
}

QuadratureResult PiecewiseSignal::integrate(const IntegrationDomain & domain, const QuadratureConfig & config) const
{
  return integrate_piecewise(*this, breakpoints_, domain, config);
}

PiecewiseSignal linear_combination(double a, const PiecewiseSignal & f, double b, const PiecewiseSignal & g,
  std::string name)
{
  std::vector<double> cuts(f.breakpoints_.begin(), f.breakpoints_.end());
  cuts.insert(cuts.end(), g.breakpoints_.begin(), g.breakpoints_.end());
  const bool positive =
    f.domain_ == SignalDomain::positive_half_line || g.domain_ == SignalDomain::positive_half_line;
  const double start = positive ? 0.0 : -kInf;
  cuts.push_back(start);
  cuts.push_back(kInf);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  cuts.erase(std::remove_if(cuts.begin(), cuts.end(), [start](double c) { return c < start; }), cuts.end());

  auto piece_at = [](const PiecewiseSignal & s, double lo, double hi) -> const Piece & {
    // a representative point strictly inside [lo, hi)
    const double probe = std::isinf(lo) ? (std::isinf(hi) ? 0.0 : hi - 1.0) : lo;
    const auto it = std::upper_bound(s.pieces_.begin(), s.pieces_.end(), probe,
      [](double v, const Piece & p) { return v < p.lo; });
    return *std::prev(it);
  };

  std::vector<Piece> pieces;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    Piece p{cuts[i], cuts[i + 1], {}};
    for (const auto & t : piece_at(f, p.lo, p.hi).terms) {
      p.terms.push_back(scale(t, a));
    }
    for (const auto & t : piece_at(g, p.lo, p.hi).terms) {
      p.terms.push_back(scale(t, b));
    }
    pieces.push_back(std::move(p));
  }
  return PiecewiseSignal(std::move(name), std::move(pieces),
    positive ? SignalDomain::positive_half_line : SignalDomain::real_line);
}

PiecewiseSignal PiecewiseSignal::restricted(double lo, double hi) const
{
  if (!(lo < hi)) {
    throw std::invalid_argument("restricted: need lo < hi");
  }
  std::vector<Piece> out;
  for (const auto & p : pieces_) {
    const double l = std::max(p.lo, lo);
    const double h = std::min(p.hi, hi);
    if (l < h) {
      out.push_back({l, h, p.terms});
    }
  }
  std::ostringstream nm;
  nm.precision(17);
  nm << name_ << "@" << lo << "," << hi;
  return PiecewiseSignal(nm.str(), std::move(out), domain_);
}

PiecewiseSignal signal_by_name(std::string_view spec_view)
{
  const std::string spec(spec_view);
  if (spec == "fig2") {
    return PiecewiseSignal("fig2", {
      {-kInf, -5.0, {power(40.0, -2.0)}},
      {-5.0, -3.0, {constant(-1.0)}},
      {-3.0, -2.0, {constant(2.0)}},
      {-2.0, -1.0, {constant(-0.5)}},
      {-1.0, 0.0, {constant(1.5)}},
      {0.0, 1.0, {constant(1.0)}},
      {1.0, 2.0, {constant(-0.5)}},
      {2.0, kInf, {power(-2.0, -5.0)}},
    });
  }
  if (spec == "fig3") {
    return PiecewiseSignal("fig3", {
      {-kInf, -1.0, {power(1.0, -2.0)}},
      {-1.0, 0.0, {constant(-1.0)}},
      {0.0, 2.0, {constant(2.0)}},
      {2.0, kInf, {power(-3.0, -3.0)}},
    });
  }
  if (spec == "fig4") {
    return PiecewiseSignal("fig4", {
      {0.0, 2.0, {linear(0.0, 2.0)}},
      {2.0, 4.0, {constant(1.0)}},
      {4.0, kInf, {power(-25.0, -3.0)}},
    }, SignalDomain::positive_half_line);
  }
  if (spec == "ramp") {
    return PiecewiseSignal("ramp", {
      {-1.0, 0.0, {linear(1.0, 1.0)}},
      {0.0, 1.0, {linear(1.0, -1.0)}},
    });
  }
  if (spec == "gauss") {
    return PiecewiseSignal("gauss", {{-kInf, kInf, {gaussian(1.0, 0.0, 1.0)}}});
  }
  if (spec.starts_with("const:")) {
    const double c = parse_number(spec.substr(6));
    return PiecewiseSignal(spec, {{-kInf, kInf, {constant(c)}}});
  }
  if (spec.starts_with("indicator:")) {
    const auto parts = split(spec.substr(10), ',');
    if (parts.size() != 2) {
      throw std::invalid_argument("indicator needs two bounds: " + spec);
    }
    const double a = parse_number(parts[0]);
    const double b = parse_number(parts[1]);
    if (!(a < b) || std::isinf(a) || std::isinf(b)) {
      throw std::invalid_argument("indicator needs finite a < b: " + spec);
    }
    return PiecewiseSignal(spec, {{a, b, {constant(1.0)}}});
  }
  if (spec.starts_with("csv:")) {
    return load_signal_csv_file(spec.substr(4));
  }
  throw std::invalid_argument("unknown signal: " + spec);
}

std::vector<std::string> signal_catalog()
{
  return {"fig2", "fig3", "fig4", "const:<c>", "indicator:<a>,<b>", "ramp", "gauss", "csv:<path>"};
}

PiecewiseSignal load_signal_csv(std::istream & in, std::string name)
{
  struct Row
  {
    double start;
    Piece piece;
  };
  std::vector<Row> rows;
  SignalDomain domain = SignalDomain::real_line;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto fields = split(line, ',');
    if (fields.empty() || fields[0].empty()) {
      continue;
    }
    if (fields[0][0] == '#') {
      if (line.find("domain=positive") != std::string::npos) {
        domain = SignalDomain::positive_half_line;
      }
      continue;
    }
    if (fields[0] == "breakpoint") {
      continue;
    }
    const auto where = [&] { return name + ":" + std::to_string(line_no); };
    if (fields.size() < 2) {
      throw std::invalid_argument(where() + ": expected breakpoint,formula[,p1[,p2]]");
    }
    const double start = parse_number(fields[0]);
    auto param = [&](std::size_t i) {
      if (fields.size() <= i || fields[i].empty()) {
        throw std::invalid_argument(where() + ": missing parameter for " + fields[1]);
      }
      return parse_number(fields[i]);
    };
    Piece p{start, kInf, {}};
    if (fields[1] == "const") {
      p.terms.push_back(constant(param(2)));
    } else if (fields[1] == "linear") {
      p.terms.push_back(linear(param(2), param(3)));
    } else if (fields[1] == "power") {
      p.terms.push_back(power(param(2), param(3)));
    } else if (fields[1] != "none") {
      throw std::invalid_argument(where() + ": unknown formula id '" + fields[1] + "'");
    }
    if (!rows.empty() && !(start > rows.back().start)) {
      throw std::invalid_argument(where() + ": breakpoints must be strictly increasing");
    }
    rows.push_back({start, std::move(p)});
  }
  std::vector<Piece> pieces;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    Piece p = rows[i].piece;
    p.hi = (i + 1 < rows.size()) ? rows[i + 1].start : kInf;
    pieces.push_back(std::move(p));
  }
  return PiecewiseSignal(std::move(name), std::move(pieces), domain);
}

PiecewiseSignal load_signal_csv_file(const std::string & path)
{
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open signal file: " + path);
  }
  return load_signal_csv(in, "csv:" + path);
}

}  // namespace unisamp
