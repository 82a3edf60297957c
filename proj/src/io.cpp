#include "gkpstab/io.hpp"

#include <cstdio>
#include <fstream>

#include "gkpstab/errors.hpp"

namespace gkpstab {

namespace {

std::string csv_escape(const std::string& cell) {
  if (cell.find_first_of(",\"\n") == std::string::npos) return cell;
  std::string out = "\"";
  for (char c : cell) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

void write_row(std::ostream& os, const std::vector<std::string>& cells,
               const std::string& first) {
  os << first;
  for (const auto& c : cells) os << ',' << csv_escape(c);
  os << '\n';
}

Vec vec_from_json(const Json& j, const char* what) {
  if (!j.is_array())
    throw ConfigError(std::string(what) + ": expected an array");
  Vec v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number())
      throw ConfigError(std::string(what) + ": expected numbers");
    v(static_cast<int>(i)) = j[i].get<double>();
  }
  return v;
}

}  // namespace

std::string format_sig(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

void write_csv(std::ostream& os, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
  write_row(os, header, "format_version");
  for (const auto& row : rows) {
    if (row.size() != header.size())
      throw ConfigError("write_csv: row width does not match header");
    write_row(os, row, "1");
  }
}

Json to_json(const Mat& m) {
  Json rows = Json::array();
  for (int i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Mat mat_from_json(const Json& j) {
  if (!j.is_array() || j.empty())
    throw ConfigError("matrix: expected a non-empty array of rows");
  const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
  if (cols == 0) throw ConfigError("matrix: expected non-empty rows");
  Mat m(static_cast<int>(j.size()), static_cast<int>(cols));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_array() || j[i].size() != cols)
      throw ConfigError("matrix: rows must be equal-length arrays");
    for (std::size_t k = 0; k < cols; ++k) {
      if (!j[i][k].is_number())
        throw ConfigError("matrix: entries must be numbers");
      m(static_cast<int>(i), static_cast<int>(k)) = j[i][k].get<double>();
    }
  }
  return m;
}

Json to_json(const DecodeReport& rep) {
  Json j{{"v_out", to_json(rep.v_out)},
         {"sigma_gm_sq", rep.sigma_gm_sq},
         {"sigma_rms_sq", rep.sigma_rms_sq},
         {"numerical_error", rep.numerical_error},
         {"samples_or_nodes", rep.samples_or_nodes}};
  j["seed"] = rep.seed ? Json(*rep.seed) : Json(nullptr);
  return j;
}

Json to_json(const ReductionResult& res) {
  Json gains = Json::array();
  for (int i = 0; i < res.gains.size(); ++i) gains.push_back(res.gains(i));
  return Json{{"gains", std::move(gains)},
              {"lambda_d", to_json(res.lambda_d.entries)},
              {"lambda_a", to_json(res.lambda_a.entries)},
              {"residual", res.residual}};
}

ReductionResult reduction_from_json(const Json& j) {
  ReductionResult res;
  res.gains = vec_from_json(j.at("gains"), "reduction gains");
  res.lambda_d = as_symplectic(mat_from_json(j.at("lambda_d")), 1e-8);
  res.lambda_a = as_symplectic(mat_from_json(j.at("lambda_a")), 1e-8);
  res.residual = j.at("residual").get<double>();
  return res;
}

Json to_json(const BoundsReport& rep) {
  return Json{{"sigma_lb", rep.sigma_lb},
              {"capacity_lb_bits", rep.capacity_lb_bits},
              {"capacity_ub_bits", rep.capacity_ub_bits},
              {"no_threshold_tr_lb", rep.no_threshold_tr_lb},
              {"breakeven_window",
               {{"low", rep.breakeven_window.first},
                {"high", rep.breakeven_window.second}}}};
}

Json to_json(const OptResult& res) {
  return Json{{"params", res.params},
              {"objective", res.objective},
              {"sigma_gm_sq", res.sigma_gm_sq},
              {"sigma_rms_sq", res.sigma_rms_sq},
              {"evaluations", res.evaluations},
              {"multi_start_spread", res.multi_start_spread}};
}

Json to_json(const EntropyReport& rep) {
  return Json{{"s_xd", rep.s_xd},
              {"s_xa", rep.s_xa},
              {"s_joint", rep.s_joint},
              {"mutual_info", rep.mutual_info},
              {"cond_entropy", rep.cond_entropy}};
}

Json load_json(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open " + path);
  try {
    return Json::parse(is);
  } catch (const Json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

void save_json(const std::string& path, const Json& j) {
  std::ofstream os(path);
  if (!os) throw ConfigError("cannot write " + path);
  os << j.dump(2) << '\n';
  if (!os) throw ConfigError("failed while writing " + path);
}

void reject_unknown_keys(const Json& obj,
                         const std::vector<std::string>& allowed,
                         const std::string& context) {
  if (!obj.is_object()) throw ConfigError(context + ": expected an object");
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const auto& key : allowed)
      if (item.key() == key) {
        known = true;
        break;
      }
    if (!known)
      throw ConfigError(context + ": unknown key '" + item.key() + "'");
  }
}

Lattice lattice_from_spec(const std::string& label, int modes) {
  if (modes < 1) throw ConfigError("lattice: mode count must be positive");
  if (label == "square") return square(modes);
  if (label == "hexagonal") {
    if (modes == 1) return hexagonal();
    if (modes == 2) {
      const Lattice h = hexagonal();
      return {direct_sum(h.generator, h.generator), 2, "hexagonal"};
    }
    throw ConfigError("lattice: hexagonal supports 1 or 2 modes");
  }
  if (label == "hexagonal-pair") {
    if (modes != 2)
      throw ConfigError("lattice: hexagonal-pair covers exactly 2 modes");
    return hexagonal_pair();
  }
  if (label == "d4") {
    if (modes != 2) throw ConfigError("lattice: d4 covers exactly 2 modes");
    return d4();
  }
  if (label == "bell") {
    if (modes != 2) throw ConfigError("lattice: bell covers exactly 2 modes");
    return bell();
  }
  const std::string rect = "rectangular:";
  if (label.rfind(rect, 0) == 0) {
    if (modes != 1)
      throw ConfigError("lattice: rectangular covers exactly 1 mode");
    double eta = 0.0;
    try {
      eta = std::stod(label.substr(rect.size()));
    } catch (const std::exception&) {
      throw ConfigError("lattice: cannot parse aspect in '" + label + "'");
    }
    return rectangular(eta);
  }
  throw ConfigError("lattice: unknown label '" + label + "'");
}

}  // namespace gkpstab
