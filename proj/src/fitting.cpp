#include "quasimode/fitting.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <Eigen/Dense>
#include <boost/math/tools/minima.hpp>

namespace quasimode {

std::string_view model_id(FitModel m) {
  switch (m) {
  case FitModel::CoLinear: return "co_linear";
  case FitModel::CounterLowLinear: return "counter_low_linear";
  case FitModel::CounterHighInverse: return "counter_high_inverse";
  case FitModel::CounterHighGeneral: return "counter_high_general";
  }
  return "unknown";
}

FitDataset FitDataset::select(Direction d, double min_power, double max_power) const {
  FitDataset out;
  for (const auto& row : rows)
    if (row.direction == d && row.power >= min_power && row.power < max_power) out.rows.push_back(row);
  return out;
}

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream is(line);
  while (std::getline(is, cell, ',')) cells.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

double parse_number(const std::string& cell, std::size_t line_no, const char* column) {
  double v = 0.0;
  const char* begin = cell.data();
  const char* end = begin + cell.size();
  if (!cell.empty() && *begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, v);
  if (cell.empty() || ec != std::errc() || ptr != end || !std::isfinite(v))
    throw FitInputError("line " + std::to_string(line_no) + ": bad " + column + " value '" + cell + "'");
  return v;
}

struct Sums {
  double w = 0, wx = 0, wy = 0;
};

// Free parameter names per model.
std::vector<std::string> parameter_names(FitModel m) {
  switch (m) {
  case FitModel::CoLinear: return {"p0", "p1"};
  case FitModel::CounterLowLinear: return {"q0", "q1"};
  case FitModel::CounterHighInverse: return {"q3"};
  case FitModel::CounterHighGeneral: return {"q2", "q3", "q4"};
  }
  return {};
}

double weight_of(const FitRow& row) { return row.weight.value_or(1.0); }

void check_rows(const FitDataset& data, std::size_t min_rows, std::string_view model) {
  if (data.rows.size() < min_rows)
    throw FitInputError(std::string(model) + ": need at least " + std::to_string(min_rows) + " rows, got " +
                        std::to_string(data.rows.size()));
  for (const auto& row : data.rows) {
    if (!(row.power >= 0.0) || !std::isfinite(row.power)) throw FitInputError("power must be finite and >= 0");
    if (!(row.linewidth > 0.0) || !std::isfinite(row.linewidth))
      throw FitInputError("linewidth must be finite and > 0");
    if (!(weight_of(row) > 0.0) || !std::isfinite(weight_of(row))) throw FitInputError("weight must be > 0");
  }
}

FitResult make_result(FitModel m, const std::vector<double>& values, const std::vector<double>& variances,
                      double rss, std::size_t n) {
  FitResult r;
  r.model_id = std::string(model_id(m));
  const auto names = parameter_names(m);
  r.n_points = n;
  r.dof = n - names.size();
  r.residual_norm = std::sqrt(rss);
  for (std::size_t i = 0; i < names.size(); ++i) {
    r.params.push_back({names[i], values[i]});
    r.two_sigma.push_back({names[i], r.dof == 0 ? 0.0 : 2.0 * std::sqrt(std::max(0.0, variances[i]))});
  }
  return r;
}

const NamedValue* find(const std::vector<NamedValue>& v, std::string_view name) {
  for (const auto& nv : v)
    if (nv.name == name) return &nv;
  return nullptr;
}

} // namespace

FitDataset read_fit_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (!trim(line).empty()) {
      header = split(line);
      break;
    }
  }
  const std::vector<std::string> required{"direction", "power_uW", "linewidth_kHz"};
  const bool has_weight = header.size() == 4 && header[3] == "weight";
  if (header.size() < 3 || !std::equal(required.begin(), required.end(), header.begin()) ||
      (header.size() == 4 && !has_weight) || header.size() > 4)
    throw FitInputError("CSV header must be 'direction,power_uW,linewidth_kHz[,weight]'");

  FitDataset data;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto cells = split(line);
    if (cells.size() != header.size())
      throw FitInputError("line " + std::to_string(line_no) + ": expected " + std::to_string(header.size()) +
                          " columns, got " + std::to_string(cells.size()));
    FitRow row{};
    if (cells[0] == "+") row.direction = Direction::Plus;
    else if (cells[0] == "-") row.direction = Direction::Minus;
    else throw FitInputError("line " + std::to_string(line_no) + ": direction must be '+' or '-'");
    row.power = parse_number(cells[1], line_no, "power_uW");
    row.linewidth = parse_number(cells[2], line_no, "linewidth_kHz");
    if (has_weight) row.weight = parse_number(cells[3], line_no, "weight");
    if (row.power < 0.0) throw FitInputError("line " + std::to_string(line_no) + ": negative power");
    if (row.linewidth <= 0.0) throw FitInputError("line " + std::to_string(line_no) + ": linewidth must be > 0");
    if (row.weight && *row.weight <= 0.0) throw FitInputError("line " + std::to_string(line_no) + ": weight must be > 0");
    data.rows.push_back(row);
  }
  return data;
}

FitDataset read_fit_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FitInputError("cannot open data file: " + path);
  return read_fit_csv(in);
}

void write_fit_csv(std::ostream& out, const FitDataset& data) {
  const bool weighted = std::any_of(data.rows.begin(), data.rows.end(), [](const auto& r) { return r.weight.has_value(); });
  out << "direction,power_uW,linewidth_kHz" << (weighted ? ",weight" : "") << '\n';
  out.precision(17);
  for (const auto& r : data.rows) {
    out << to_char(r.direction) << ',' << r.power << ',' << r.linewidth;
    if (weighted) out << ',' << weight_of(r);
    out << '\n';
  }
}

double FitResult::param(std::string_view name) const {
  if (const auto* p = find(params, name)) return p->value;
  if (const auto* p = find(fixed, name)) return p->value;
  throw std::out_of_range("fit result has no parameter " + std::string(name));
}

double FitResult::error(std::string_view name) const {
  if (const auto* p = find(two_sigma, name)) return p->value;
  throw std::out_of_range("fit result has no uncertainty for " + std::string(name));
}

double FitResult::predict(double x) const {
  if (model_id == quasimode::model_id(FitModel::CoLinear)) return param("p0") + param("p1") * x;
  if (model_id == quasimode::model_id(FitModel::CounterLowLinear)) return param("q0") + param("q1") * x;
  if (model_id == quasimode::model_id(FitModel::CounterHighInverse)) return param("q2") + param("q3") / x;
  if (model_id == quasimode::model_id(FitModel::CounterHighGeneral))
    return param("q2") + param("q3") / (param("q4") + x);
  throw std::logic_error("unknown model " + model_id);
}

void to_json(nlohmann::json& j, const FitResult& r) {
  auto as_object = [](const std::vector<NamedValue>& v) {
    auto o = nlohmann::json::object();
    for (const auto& nv : v) o[nv.name] = nv.value;
    return o;
  };
  j = nlohmann::json{{"model_id", r.model_id},
                     {"params", as_object(r.params)},
                     {"two_sigma", as_object(r.two_sigma)},
                     {"residual_norm", r.residual_norm},
                     {"n_points", r.n_points}};
  j["dof"] = r.dof;
  if (!r.fixed.empty()) j["fixed"] = as_object(r.fixed);
  if (!r.warnings.empty()) j["warnings"] = r.warnings;
}

void from_json(const nlohmann::json& j, FitResult& r) {
  auto read = [](const nlohmann::json& o) {
    std::vector<NamedValue> v;
    for (const auto& [k, val] : o.items()) v.push_back({k, val.get<double>()});
    return v;
  };
  r.model_id = j.at("model_id").get<std::string>();
  r.params = read(j.at("params"));
  r.two_sigma = read(j.at("two_sigma"));
  r.residual_norm = j.at("residual_norm").get<double>();
  r.n_points = j.at("n_points").get<std::size_t>();
  r.dof = j.value("dof", std::size_t{0});
  r.fixed = j.contains("fixed") ? read(j.at("fixed")) : std::vector<NamedValue>{};
  r.warnings = j.value("warnings", std::vector<std::string>{});
}

FitResult fit_linear(const FitDataset& data, FitModel model) {
  if (model != FitModel::CoLinear && model != FitModel::CounterLowLinear)
    throw std::invalid_argument("fit_linear: model must be co_linear or counter_low_linear");
  check_rows(data, 2, model_id(model));

  // Normal equations for (c0, c1), solved in centred form.
  Sums s;
  for (const auto& row : data.rows) {
    const double w = weight_of(row);
    s.w += w;
    s.wx += w * row.power;
    s.wy += w * row.linewidth;
  }
  const double x_mean = s.wx / s.w;
  const double y_mean = s.wy / s.w;
  double sxx = 0.0, sxy = 0.0, scale = 0.0;
  for (const auto& row : data.rows) {
    const double w = weight_of(row);
    const double dx = row.power - x_mean;
    sxx += w * dx * dx;
    sxy += w * dx * (row.linewidth - y_mean);
    scale += w * row.power * row.power;
  }
  if (!(sxx > 1e-14 * scale) || sxx == 0.0)
    throw SingularFitError(std::string(model_id(model)) + ": design matrix is singular (all powers identical)");

  const double c1 = sxy / sxx;
  const double c0 = y_mean - c1 * x_mean;
  double rss = 0.0;
  for (const auto& row : data.rows) {
    const double r = row.linewidth - (c0 + c1 * row.power);
    rss += weight_of(row) * r * r;
  }
  const std::size_t n = data.rows.size();
  const double s2 = n > 2 ? rss / static_cast<double>(n - 2) : 0.0;
  return make_result(model, {c0, c1}, {s2 * (1.0 / s.w + x_mean * x_mean / sxx), s2 / sxx}, rss, n);
}

FitResult fit_high_power_counter(const FitDataset& data, double q2_fixed) {
  check_rows(data, 1, model_id(FitModel::CounterHighInverse));
  if (!std::isfinite(q2_fixed)) throw FitInputError("counter_high_inverse: q2 must be finite");
  double num = 0.0, den = 0.0;
  for (const auto& row : data.rows) {
    if (!(row.power > 0.0)) throw FitInputError("counter_high_inverse: every power must be > 0");
    const double w = weight_of(row);
    num += w * (row.linewidth - q2_fixed) / row.power;
    den += w / (row.power * row.power);
  }
  const double q3 = num / den;
  double rss = 0.0;
  for (const auto& row : data.rows) {
    const double r = row.linewidth - q2_fixed - q3 / row.power;
    rss += weight_of(row) * r * r;
  }
  const std::size_t n = data.rows.size();
  const double s2 = n > 1 ? rss / static_cast<double>(n - 1) : 0.0;
  auto result = make_result(FitModel::CounterHighInverse, {q3}, {s2 / den}, rss, n);
  result.fixed = {{"q2", q2_fixed}, {"q4", 0.0}};
  return result;
}

FitResult fit_high_power_counter_general(const FitDataset& data) {
  check_rows(data, 3, model_id(FitModel::CounterHighGeneral));
  double x_max = 0.0;
  for (const auto& row : data.rows) x_max = std::max(x_max, row.power);
  if (!(x_max > 0.0)) throw FitInputError("counter_high_general: powers must not all be zero");

  // For fixed q4 the model is linear in (q2, q3).
  struct Linear {
    double q2, q3, rss;
  };
  auto solve_linear = [&](double q4) -> Linear {
    Eigen::Matrix2d ata = Eigen::Matrix2d::Zero();
    Eigen::Vector2d aty = Eigen::Vector2d::Zero();
    for (const auto& row : data.rows) {
      const double w = weight_of(row);
      const Eigen::Vector2d a(1.0, 1.0 / (q4 + row.power));
      ata += w * a * a.transpose();
      aty += w * a * row.linewidth;
    }
    Eigen::FullPivLU<Eigen::Matrix2d> lu(ata);
    if (!lu.isInvertible()) throw SingularFitError("counter_high_general: regressors are collinear");
    const Eigen::Vector2d c = lu.solve(aty);
    double rss = 0.0;
    for (const auto& row : data.rows) {
      const double r = row.linewidth - c(0) - c(1) / (q4 + row.power);
      rss += weight_of(row) * r * r;
    }
    return {c(0), c(1), rss};
  };

  double x_min = x_max;
  for (const auto& row : data.rows) x_min = std::min(x_min, row.power);
  const double lower = x_min > 0.0 ? 0.0 : 1e-9 * x_max;
  const auto [q4, rss_min] = boost::math::tools::brent_find_minima(
      [&](double q4v) { return solve_linear(q4v).rss; }, lower, 100.0 * x_max, std::numeric_limits<double>::digits / 2);
  (void)rss_min;
  const auto best = solve_linear(q4);

  Eigen::Matrix3d jtj = Eigen::Matrix3d::Zero();
  for (const auto& row : data.rows) {
    const double u = 1.0 / (q4 + row.power);
    const Eigen::Vector3d jrow(1.0, u, -best.q3 * u * u);
    jtj += weight_of(row) * jrow * jrow.transpose();
  }
  const std::size_t n = data.rows.size();
  const double s2 = n > 3 ? best.rss / static_cast<double>(n - 3) : 0.0;
  Eigen::FullPivLU<Eigen::Matrix3d> lu(jtj);
  if (!lu.isInvertible()) throw SingularFitError("counter_high_general: Jacobian is rank deficient");
  const Eigen::Matrix3d cov = s2 * lu.inverse();
  auto result = make_result(FitModel::CounterHighGeneral, {best.q2, best.q3, q4},
                            {cov(0, 0), cov(1, 1), cov(2, 2)}, best.rss, n);

  const Eigen::Matrix3d unscaled = lu.inverse();
  double worst = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < i; ++j)
      worst = std::max(worst, std::abs(unscaled(i, j)) / std::sqrt(unscaled(i, i) * unscaled(j, j)));
  if (worst > 0.9) {
    std::ostringstream msg;
    msg.precision(3);
    msg << "parameters strongly correlated (max |corr| = " << worst << "); prefer counter_high_inverse";
    result.warnings.push_back(msg.str());
  }
  if (q4 <= lower) result.warnings.emplace_back("q4 at its lower bound");
  return result;
}

double q2_from_low_fit(const FitResult& low, double breakpoint_power) {
  if (low.model_id != model_id(FitModel::CounterLowLinear))
    throw FitInputError("q2 needs a counter_low_linear fit, got " + low.model_id);
  return low.param("q0") + breakpoint_power * low.param("q1");
}

double piecewise_beta_squared(double alpha_sq, double alpha0_sq, double r, double s) {
  if (!(r > 0.0)) throw std::domain_error("piecewise_beta_squared: r must be > 0");
  if (!(s >= 0.0) || !(alpha0_sq >= 0.0)) throw std::domain_error("piecewise_beta_squared: s and alpha0^2 must be >= 0");
  return alpha_sq <= alpha0_sq ? alpha_sq / r : s * alpha0_sq;
}

std::vector<LinewidthPrediction> predict_linewidths(const SystemParams& phys, const PumpSchedule& schedule,
                                                    std::span<const double> powers) {
  validate(phys);
  std::vector<LinewidthPrediction> out;
  out.reserve(powers.size());
  for (double x : powers) {
    if (!(x >= 0.0)) throw std::domain_error("predict_linewidths: powers must be >= 0");
    SystemParams p = phys;
    const double alpha_sq = schedule.eta_conv * x;
    p.alpha = std::sqrt(alpha_sq);
    p.beta = std::sqrt(piecewise_beta_squared(alpha_sq, schedule.alpha0_sq, schedule.r, schedule.s));
    out.push_back({x, linewidth_at_resonance(p, Direction::Plus), linewidth_at_resonance(p, Direction::Minus)});
  }
  return out;
}

double p1_from_physical(const SystemParams& phys, double eta_conv) {
  return 4.0 * eta_conv * phys.lambda_c * phys.lambda_c / phys.kappa;
}

double gamma_eff(const SystemParams& phys) { return phys.gamma + 4.0 * phys.V0 * phys.V0 / phys.Gamma; }

double q3_from_physical(const SystemParams& phys, double eta_conv) {
  return phys.kappa * phys.V0 * phys.V0 / (eta_conv * phys.g_c * phys.g_c);
}

double q4_from_physical(const SystemParams& phys, double eta_conv) {
  return phys.kappa * phys.Gamma / (4.0 * eta_conv * phys.g_c * phys.g_c);
}

} // namespace quasimode
