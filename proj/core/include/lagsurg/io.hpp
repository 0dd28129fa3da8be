#pragma once

#include "lagsurg/ainfty.hpp"
#include "lagsurg/cellular.hpp"
#include "lagsurg/cone.hpp"
#include "lagsurg/floer.hpp"
#include "lagsurg/surgery.hpp"

#include <nlohmann/json.hpp>

#include <string>

namespace lagsurg::io {

using nlohmann::json;

json to_json(const novikov::Element& e);
novikov::Element element_from_json(const json& j, const std::string& where = "element");

json to_json(const cellular::CellComplex& C);
cellular::CellComplex complex_from_json(const json& j);

json to_json(const ainfty::Cochain& c);
ainfty::Cochain cochain_from_json(const json& j);

json to_json(const ainfty::Disk& d);
ainfty::Disk disk_from_json(const json& j, const std::string& where);

json to_json(const ainfty::AlgebraOptions& o);
ainfty::AlgebraOptions options_from_json(const json& j);

// {"complex": ..., "atlas": {"generators", "disks", "delta_gap", "local_system"}, "options": ...}
json to_json(const ainfty::Algebra& A);
ainfty::Algebra algebra_from_json(const json& j);

struct SurgeryInput {
    surgery::SurgeryData data;
    surgery::Caps caps;
    bool annotated = false;
    std::optional<cellular::CellComplex> target;
    std::map<std::string, novikov::Element> target_local;
};

json to_json(const SurgeryInput& s);
SurgeryInput surgery_from_json(const json& j);

json to_json(const cone::BimoduleAtlas& B);
cone::BimoduleAtlas bimodule_from_json(const json& j);

json to_json(const floer::RankCertificate& c);
json to_json(const floer::HFReport& r);
json to_json(const surgery::CurveReport& r);
json to_json(const std::vector<surgery::FamilyCheck>& checks);

json read_file(const std::string& path);
void write_file(const std::string& path, const json& j);

} // namespace lagsurg::io
