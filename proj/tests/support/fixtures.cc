#include "support/fixtures.h"

#include "nlohmann/json.hpp"

#include "tripplan/ltl/parse.h"
#include "tripplan/util/csv.h"

namespace tripplan::test {

std::filesystem::path fixture_dir(std::string_view const name) {
  return std::filesystem::path{TRIPPLAN_FIXTURE_DIR} / name;
}

std::string read_fixture(std::string_view const name,
                         std::string_view const file) {
  return geodata::read_file(fixture_dir(name) / file);
}

service::network load_fixture(std::string_view const name) {
  return service::load_network(fixture_dir(name));
}

pcf::coefficient_profile fixture_profile(std::string_view const name,
                                         std::string_view const answers) {
  return pcf::derive_coefficients(
      pcf::parse_answers(nlohmann::json::parse(read_fixture(name, answers))));
}

ltl::formula fixture_constraint(std::string_view const name) {
  return ltl::parse(util::trim(read_fixture(name, "constraint.txt")));
}

}  // namespace tripplan::test
