#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "vqopt/lbfgs.hpp"
#include "vqopt/powell.hpp"
#include "vqopt/problems.hpp"
#include "vqopt/sweeps.hpp"

namespace vqopt {

/// Minimal TOML subset used by the experiment configs: [tables],
/// key = value with strings, integers, floats, booleans, and flat arrays;
/// '#' comments. Keys are flattened to "table.key".
namespace toml_lite {

struct Value;
using Array = std::vector<Value>;

struct Value {
    std::variant<std::string, double, std::int64_t, bool, Array> data;

    bool is_string() const { return std::holds_alternative<std::string>(data); }
    bool is_number() const {
        return std::holds_alternative<double>(data) ||
               std::holds_alternative<std::int64_t>(data);
    }
    const std::string& as_string() const;
    double as_double() const;
    std::int64_t as_int() const;
    bool as_bool() const;
    const Array& as_array() const;
};

using Table = std::map<std::string, Value>;

Table parse(std::string_view text);
Table parse_file(const std::filesystem::path& path);

} // namespace toml_lite

enum class BaselineKind { None, Powell, Lbfgs };

/// One optimizer to run: either a Jacobi schedule with an optional
/// accelerator / pivot randomization, or a baseline.
struct MethodSpec {
    std::string name;
    BaselineKind baseline = BaselineKind::None;
    ScheduleKind schedule = ScheduleKind::Jacobi1;
    Accelerator accelerator = Accelerator::None;
    bool randomize = false;
};

/// Parses tokens like "jacobi1", "jacobiA", "jacobi2-pulay",
/// "jacobi1-rand", "powell", "lbfgs". Randomization combined with an
/// accelerator is rejected.
MethodSpec parse_method_token(std::string_view token);

struct ExperimentConfig {
    ProblemSpec problem;
    std::vector<MethodSpec> methods;
    SweepConfig sweep;
    AcceleratorConfig accel; // capacity/flush defaults for accelerated methods
    PowellConfig powell;
    LbfgsConfig lbfgs;
    std::uint64_t rand_seed = 0; // pivot randomization seed
    std::string output_dir = "results";
    bool record_wall_time = true;
};

ExperimentConfig load_experiment_config(const std::filesystem::path& path);
ExperimentConfig experiment_config_from_table(const toml_lite::Table& table);

} // namespace vqopt
