#include "frictionsim/assessment.hpp"

#include <cmath>
#include <limits>
#include <numeric>

#include "frictionsim/errors.hpp"

namespace frictionsim {
namespace {

constexpr int kMaxIterations = 10000;
constexpr double kTiny = 1e-300;
constexpr double kEpsilon = 1e-16;

// Modified Lentz evaluation of the continued fraction for I_x(a, b).
double beta_continued_fraction(double a, double b, double x) {
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIterations; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kEpsilon) return h;
  }
  return h;
}

struct Moments {
  double mean;
  double variance;  // unbiased
};

Moments moments(std::span<const double> xs) {
  const double n = static_cast<double>(xs.size());
  const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  double ss = 0.0;
  for (const double x : xs) ss += (x - mean) * (x - mean);
  return {mean, ss / (n - 1.0)};
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) return out;
    start = pos + 1;
  }
}

// Non-blank lines with their 1-based line numbers.
std::vector<std::pair<std::size_t, std::string_view>> lines_of(std::string_view text) {
  std::vector<std::pair<std::size_t, std::string_view>> out;
  std::size_t number = 0;
  for (const auto line : split(text, '\n')) {
    ++number;
    if (!line.empty()) out.emplace_back(number, line);
  }
  return out;
}

double parse_double(std::string_view field, std::size_t line) {
  const std::string s(field);
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (s.empty() || used != s.size()) {
    throw ParseError("line " + std::to_string(line) + ": '" + s + "' is not a number");
  }
  return value;
}

}  // namespace

ScorePair::ScorePair(double test2, double test3) : test2_(test2), test3_(test3) {
  if (test2 == 100.0) throw DenominatorZero("test2 = 100 leaves no room for a gain");
  if (!(test2 >= 0.0 && test2 < 100.0)) throw ValidationError("test2", "test2 must be in [0, 100)");
  if (!(test3 >= 0.0 && test3 <= 100.0)) throw ValidationError("test3", "test3 must be in [0, 100]");
}

double normalized_gain(const ScorePair& pair) { return (pair.test3() - pair.test2()) / (100.0 - pair.test2()); }

double regularized_incomplete_beta(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double log_front =
      std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_continued_fraction(a, b, x) / a;
  return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double student_t_two_tailed_p(double t, double df) {
  if (std::isinf(t)) return 0.0;
  return regularized_incomplete_beta(0.5 * df, 0.5, df / (df + t * t));
}

double student_t_cdf(double t, double df) {
  const double tail = 0.5 * student_t_two_tailed_p(t, df);
  return t > 0.0 ? 1.0 - tail : tail;
}

TTestResult welch_t(std::span<const double> group_a, std::span<const double> group_b) {
  if (group_a.size() < 2 || group_b.size() < 2) throw InsufficientData("each group needs at least two scores");
  const Moments a = moments(group_a);
  const Moments b = moments(group_b);
  if (a.variance == 0.0 || b.variance == 0.0) throw ZeroVariance("a group has zero variance");

  const double wa = a.variance / static_cast<double>(group_a.size());
  const double wb = b.variance / static_cast<double>(group_b.size());
  const double se2 = wa + wb;

  TTestResult r;
  r.t = (a.mean - b.mean) / std::sqrt(se2);
  r.df = se2 * se2 /
         (wa * wa / static_cast<double>(group_a.size() - 1) + wb * wb / static_cast<double>(group_b.size() - 1));
  r.p_two_tailed = student_t_two_tailed_p(r.t, r.df);
  return r;
}

std::vector<StudentScores> parse_gain_csv(std::string_view text) {
  const auto lines = lines_of(text);
  if (lines.empty()) throw ParseError("scores: empty file");
  const auto header = split(lines.front().second, ',');
  const bool with_group = header.size() == 4 && header[3] == "group";
  if (header.size() < 3 || header[0] != "student_id" || header[1] != "test2" || header[2] != "test3" ||
      (header.size() == 4 && !with_group) || header.size() > 4) {
    throw ParseError("scores: expected header 'student_id,test2,test3[,group]'");
  }

  std::vector<StudentScores> out;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto [number, line] = lines[i];
    const auto fields = split(line, ',');
    if (fields.size() != header.size()) {
      throw ParseError("line " + std::to_string(number) + ": expected " + std::to_string(header.size()) + " fields");
    }
    StudentScores row;
    row.student_id = std::string(fields[0]);
    row.test2 = parse_double(fields[1], number);
    row.test3 = parse_double(fields[2], number);
    if (with_group) row.group = std::string(fields[3]);
    out.push_back(std::move(row));
  }
  return out;
}

GainReport gain_report(const std::vector<StudentScores>& scores) {
  if (scores.empty()) throw InsufficientData("no scores");
  GainReport report;
  std::map<std::string, std::pair<double, int>> sums;
  double total = 0.0;
  for (const auto& s : scores) {
    const double gain = normalized_gain(ScorePair(s.test2, s.test3));
    report.rows.push_back({s.student_id, gain, s.group});
    total += gain;
    if (s.group) {
      auto& [sum, count] = sums[*s.group];
      sum += gain;
      ++count;
    }
  }
  report.mean_gain = total / static_cast<double>(scores.size());
  for (const auto& [group, acc] : sums) report.group_means[group] = acc.first / acc.second;
  return report;
}

GroupScores parse_group_csv(std::string_view text) {
  const auto lines = lines_of(text);
  if (lines.empty()) throw ParseError("scores: empty file");
  const auto header = split(lines.front().second, ',');
  if (header.size() != 2 || header[0] != "group" || header[1] != "score") {
    throw ParseError("scores: expected header 'group,score'");
  }
  GroupScores out;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto [number, line] = lines[i];
    const auto fields = split(line, ',');
    if (fields.size() != 2) throw ParseError("line " + std::to_string(number) + ": expected 2 fields");
    const double score = parse_double(fields[1], number);
    if (fields[0] == "A") {
      out.a.push_back(score);
    } else if (fields[0] == "B") {
      out.b.push_back(score);
    } else {
      throw ParseError("line " + std::to_string(number) + ": group must be A or B");
    }
  }
  return out;
}

}  // namespace frictionsim
