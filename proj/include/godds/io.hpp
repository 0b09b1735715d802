#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include <json.hpp>

#include "godds/dgp.hpp"

namespace godds {

using Json = nlohmann::ordered_json;

// Every double written with 17 significant digits; NaN and infinities become null.
std::string dump_json(const Json& value, int indent = 2);
std::string format_double(double v);

// Header `y,a,x1,...,xd`.
void write_dataset_csv(std::ostream& out, const Dataset& data);
void write_dataset_csv(const std::filesystem::path& path, const Dataset& data);

// `source` names the input in error messages.
Dataset read_dataset_csv(std::istream& in, SamplingScheme scheme, std::optional<double> omega_design = {},
                         const std::string& source = "<stream>");
Dataset read_dataset_csv(const std::filesystem::path& path, SamplingScheme scheme,
                         std::optional<double> omega_design = {});

// DGP config: {"eps": e, "strata": [{"label", "features", "p_x", "pi1", "nu1", "nu0"}]}.
// Probabilities are numbers or exact fractions written as "a/b".
DiscreteDgp dgp_from_json(const Json& config);
Json dgp_to_json(const DiscreteDgp& dgp);
DiscreteDgp load_dgp(const std::filesystem::path& path);

Json read_json_file(const std::filesystem::path& path);

}  // namespace godds
