#pragma once

// Learning-gain arithmetic and a two-sample location test for score data.

#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace frictionsim {

class DenominatorZero : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

class InsufficientData : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

class ZeroVariance : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Mid-course (test2) and final (test3) scores in percent.
class ScorePair {
public:
  /// Throws DenominatorZero for test2 == 100, ValidationError otherwise out of range.
  ScorePair(double test2, double test3);

  double test2() const { return test2_; }
  double test3() const { return test3_; }

private:
  double test2_;
  double test3_;
};

/// (test3 - test2) / (100 - test2): the achieved share of the headroom left
/// after test2. Negative when the score dropped.
double normalized_gain(const ScorePair& pair);

struct TTestResult {
  double t = 0.0;
  double df = 0.0;
  double p_two_tailed = 1.0;
};

/// Welch's unequal-variance t-test with Welch-Satterthwaite degrees of freedom.
/// Throws InsufficientData for fewer than two scores in a group and
/// ZeroVariance when either group is constant.
TTestResult welch_t(std::span<const double> group_a, std::span<const double> group_b);

/// Regularized incomplete beta I_x(a, b), continued-fraction evaluation.
double regularized_incomplete_beta(double a, double b, double x);

/// Student-t CDF with real-valued degrees of freedom.
double student_t_cdf(double t, double df);

/// P(|T| >= |t|).
double student_t_two_tailed_p(double t, double df);

struct StudentScores {
  std::string student_id;
  double test2 = 0.0;
  double test3 = 0.0;
  std::optional<std::string> group;
};

/// CSV with header `student_id,test2,test3` and an optional trailing `group`
/// column. Throws ParseError or ValidationError.
std::vector<StudentScores> parse_gain_csv(std::string_view text);

struct GainReport {
  struct Row {
    std::string student_id;
    double gain;
    std::optional<std::string> group;
  };
  std::vector<Row> rows;
  double mean_gain = 0.0;
  std::map<std::string, double> group_means;
};

GainReport gain_report(const std::vector<StudentScores>& scores);

struct GroupScores {
  std::vector<double> a;
  std::vector<double> b;
};

/// CSV with header `group,score`, group in {A, B}. Throws ParseError.
GroupScores parse_group_csv(std::string_view text);

}  // namespace frictionsim
