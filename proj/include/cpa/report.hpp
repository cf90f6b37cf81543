#pragma once

#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "cpa/config.hpp"
#include "cpa/kernels.hpp"
#include "cpa/mech.hpp"
#include "cpa/sim.hpp"
#include "cpa/verify.hpp"

namespace cpa::report {

using Json = nlohmann::json;

// Every document carries "schema": "cpa.<kind>/1".
inline constexpr std::string_view kKinds[] = {"check", "solve", "simulate", "verify-ic", "sweep", "menu"};

Json schema(std::string_view kind);
// Paths of nodes that violate the schema; empty when the document conforms. Supports the
// keywords type, required, properties, additionalProperties (bool), items, enum and const.
std::vector<std::string> validate(const Json& doc, const Json& schema);

Json config_json(const InstanceConfig& cfg);
Json to_json(const kernels::MeanSe& m);
Json to_json(const Estimate& e);
Json to_json(const Violation& v);
Json to_json(const RegularityReport& r);
Json to_json(const IcCertificate& c);
Json to_json(const IncomeIcCertificate& c);
Json to_json(const SimReport& r);
Json to_json(const BinaryMenu& m);

using Cell = std::variant<double, long long, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

// Header row, then one line per row; doubles with 6 significant digits.
std::string to_csv(const Table& t);
// Two-space indented JSON with sorted keys and a trailing newline.
std::string dump(const Json& doc);

}  // namespace cpa::report
