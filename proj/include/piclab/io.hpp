#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "piclab/bounds.hpp"
#include "piclab/dist.hpp"
#include "piclab/pic.hpp"
#include "piclab/privacy.hpp"

namespace piclab::io {

// Distribution JSON: {"p": [[...],[...]], "x_labels": [...], "y_labels": [...]}
// row-major; labels are optional and default to indices.
struct LabeledJoint {
  dist::JointPmf joint;
  std::vector<std::string> x_labels;
  std::vector<std::string> y_labels;
};

LabeledJoint joint_from_json(const nlohmann::json& j);
nlohmann::json joint_to_json(const dist::JointPmf& j,
                             const std::vector<std::string>& x_labels = {},
                             const std::vector<std::string>& y_labels = {});

LabeledJoint load_joint(const std::string& path);

// CSV samples: two columns `x,y`; with_header skips the first line.
std::vector<std::pair<std::string, std::string>> load_csv_samples(const std::string& path,
                                                                  bool with_header);

nlohmann::json decomposition_to_json(const pic::PicDecomposition& dec);
nlohmann::json bound_to_json(const bounds::ErrorBound& b);
nlohmann::json channel_to_json(const dist::Channel& ch);
nlohmann::json privacy_to_json(const privacy::PrivacyAnalysis& a);

std::vector<double> noise_pmf_from_json(const nlohmann::json& j);

nlohmann::json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const nlohmann::json& j);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace piclab::io
