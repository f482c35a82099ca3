#include "piclab/io.hpp"

#include <fstream>
#include <sstream>

#include "piclab/errors.hpp"

namespace piclab::io {

using nlohmann::json;

namespace {

std::vector<std::string> labels_or_default(const json& j, const char* key, std::size_t n) {
  std::vector<std::string> out;
  if (j.contains(key)) {
    for (const auto& v : j.at(key)) {
      if (v.is_string())
        out.push_back(v.get<std::string>());
      else
        out.push_back(v.dump());
    }
    require(out.size() == n, ErrorKind::ParseError, "label count does not match table");
  } else {
    for (std::size_t i = 0; i < n; ++i) out.push_back(std::to_string(i));
  }
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

LabeledJoint joint_from_json(const json& j) {
  require(j.contains("p"), ErrorKind::ParseError, "distribution JSON lacks \"p\"");
  const auto& rows = j.at("p");
  require(rows.is_array() && !rows.empty(), ErrorKind::ParseError, "\"p\" must be a table");
  const std::size_t m = rows.size();
  const std::size_t n = rows.at(0).size();
  linalg::Matrix p(m, n);
  for (std::size_t i = 0; i < m; ++i) {
    require(rows.at(i).size() == n, ErrorKind::ParseError, "ragged \"p\" table");
    for (std::size_t k = 0; k < n; ++k) p(i, k) = rows.at(i).at(k).get<double>();
  }
  LabeledJoint out{dist::JointPmf(std::move(p)), labels_or_default(j, "x_labels", m),
                   labels_or_default(j, "y_labels", n)};
  return out;
}

json joint_to_json(const dist::JointPmf& j, const std::vector<std::string>& x_labels,
                   const std::vector<std::string>& y_labels) {
  json rows = json::array();
  for (std::size_t i = 0; i < j.rows(); ++i) {
    json row = json::array();
    for (std::size_t k = 0; k < j.cols(); ++k) row.push_back(j(i, k));
    rows.push_back(std::move(row));
  }
  json out{{"p", std::move(rows)}};
  if (!x_labels.empty()) out["x_labels"] = x_labels;
  if (!y_labels.empty()) out["y_labels"] = y_labels;
  return out;
}

LabeledJoint load_joint(const std::string& path) { return joint_from_json(read_json_file(path)); }

std::vector<std::pair<std::string, std::string>> load_csv_samples(const std::string& path,
                                                                  bool with_header) {
  std::ifstream in(path);
  require(in.good(), ErrorKind::IoError, "cannot open " + path);
  std::vector<std::pair<std::string, std::string>> samples;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (first && with_header) {
      first = false;
      continue;
    }
    first = false;
    const std::string t = trim(line);
    if (t.empty()) continue;
    const auto comma = t.find(',');
    require(comma != std::string::npos, ErrorKind::ParseError,
            "csv line lacks a comma: " + t);
    samples.emplace_back(trim(t.substr(0, comma)), trim(t.substr(comma + 1)));
  }
  return samples;
}

json decomposition_to_json(const pic::PicDecomposition& dec) {
  json f = json::array(), g = json::array(), ties = json::array();
  for (std::size_t i = 0; i < dec.f_funcs.rows(); ++i) {
    json row = json::array();
    for (std::size_t k = 0; k < dec.f_funcs.cols(); ++k) row.push_back(dec.f_funcs(i, k));
    f.push_back(std::move(row));
  }
  for (std::size_t i = 0; i < dec.g_funcs.rows(); ++i) {
    json row = json::array();
    for (std::size_t k = 0; k < dec.g_funcs.cols(); ++k) row.push_back(dec.g_funcs(i, k));
    g.push_back(std::move(row));
  }
  for (const auto& t : dec.ties) ties.push_back(json::array({t[0], t[1]}));
  json out{{"lambdas", dec.lambdas}, {"f", std::move(f)}, {"g", std::move(g)},
           {"ties", std::move(ties)}};
  if (dec.ill_conditioned) out["ill_conditioned"] = true;
  return out;
}

json bound_to_json(const bounds::ErrorBound& b) {
  json params = json::object();
  for (const auto& p : b.params) params[p.name] = p.value;
  return json{{"kind", bounds::bound_kind_name(b.kind)},
              {"value", b.value},
              {"vacuous", b.vacuous},
              {"params", std::move(params)}};
}

json channel_to_json(const dist::Channel& ch) {
  json rows = json::array();
  for (std::size_t i = 0; i < ch.rows(); ++i) {
    json row = json::array();
    for (std::size_t k = 0; k < ch.cols(); ++k) row.push_back(ch(i, k));
    rows.push_back(std::move(row));
  }
  return json{{"w", std::move(rows)}};
}

json privacy_to_json(const privacy::PrivacyAnalysis& a) {
  json out{{"delta", a.delta},
           {"vstar_upper", a.vstar_upper},
           {"perfect_privacy_feasible", a.perfect_privacy_feasible},
           {"borderline", a.borderline},
           {"t_star_lower", a.t_star_lower}};
  out["region"] = json{{"t", a.region.t}, {"lower", a.region.lower}, {"upper", a.region.upper}};
  if (a.constructed_map) {
    out["constructed_map"] = channel_to_json(a.constructed_map->channel);
    out["certificate_f"] = a.constructed_map->f;
    out["t0"] = a.constructed_map->t0;
  }
  return out;
}

std::vector<double> noise_pmf_from_json(const json& j) {
  const json& arr = j.is_array() ? j : j.at("p_z");
  require(arr.is_array() && !arr.empty(), ErrorKind::ParseError,
          "noise pmf must be a JSON array");
  std::vector<double> p;
  for (const auto& v : arr) p.push_back(v.get<double>());
  return p;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), ErrorKind::IoError, "cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    fail(ErrorKind::ParseError, std::string("invalid JSON in ") + path + ": " + e.what());
  }
  return j;
}

void write_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  require(out.good(), ErrorKind::IoError, "cannot write " + path);
  out << j.dump(2) << "\n";
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  require(out.good(), ErrorKind::IoError, "cannot write " + path);
  out << text;
}

}  // namespace piclab::io
