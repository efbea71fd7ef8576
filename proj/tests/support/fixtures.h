#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "tripplan/ltl/formula.h"
#include "tripplan/pcf/pcf.h"
#include "tripplan/service/plan_doc.h"

namespace tripplan::test {

std::filesystem::path fixture_dir(std::string_view name);

std::string read_fixture(std::string_view name, std::string_view file);

service::network load_fixture(std::string_view name);

// Coefficients derived from an answers file of the fixture.
pcf::coefficient_profile fixture_profile(
    std::string_view name, std::string_view answers = "answers.json");

ltl::formula fixture_constraint(std::string_view name);

}  // namespace tripplan::test
