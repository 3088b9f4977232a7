#include "vqopt/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "vqopt/errors.hpp"

namespace vqopt {

namespace toml_lite {

const std::string& Value::as_string() const {
    if (!is_string()) throw InvalidInputError("config: expected a string value");
    return std::get<std::string>(data);
}

double Value::as_double() const {
    if (std::holds_alternative<double>(data)) return std::get<double>(data);
    if (std::holds_alternative<std::int64_t>(data)) {
        return static_cast<double>(std::get<std::int64_t>(data));
    }
    throw InvalidInputError("config: expected a numeric value");
}

std::int64_t Value::as_int() const {
    if (std::holds_alternative<std::int64_t>(data)) {
        return std::get<std::int64_t>(data);
    }
    throw InvalidInputError("config: expected an integer value");
}

bool Value::as_bool() const {
    if (!std::holds_alternative<bool>(data)) {
        throw InvalidInputError("config: expected a boolean value");
    }
    return std::get<bool>(data);
}

const Array& Value::as_array() const {
    if (!std::holds_alternative<Array>(data)) {
        throw InvalidInputError("config: expected an array value");
    }
    return std::get<Array>(data);
}

namespace {

std::string_view strip(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
        s.remove_prefix(1);
    }
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
        s.remove_suffix(1);
    }
    return s;
}

/// Removes a trailing comment, respecting quoted strings.
std::string_view strip_comment(std::string_view line) {
    bool in_string = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"') in_string = !in_string;
        if (line[i] == '#' && !in_string) return line.substr(0, i);
    }
    return line;
}

Value parse_scalar(std::string_view text, int line_no) {
    text = strip(text);
    if (text.empty()) {
        throw InvalidInputError("config line " + std::to_string(line_no) +
                                ": missing value");
    }
    if (text.front() == '"') {
        if (text.size() < 2 || text.back() != '"') {
            throw InvalidInputError("config line " + std::to_string(line_no) +
                                    ": unterminated string");
        }
        return Value{std::string(text.substr(1, text.size() - 2))};
    }
    if (text == "true") return Value{true};
    if (text == "false") return Value{false};

    const std::string num(text);
    const bool looks_float = num.find_first_of(".eE") != std::string::npos;
    if (!looks_float) {
        std::int64_t i = 0;
        auto [p, ec] = std::from_chars(num.data(), num.data() + num.size(), i);
        if (ec == std::errc() && p == num.data() + num.size()) return Value{i};
    }
    try {
        std::size_t pos = 0;
        const double d = std::stod(num, &pos);
        if (pos == num.size()) return Value{d};
    } catch (const std::exception&) {
    }
    throw InvalidInputError("config line " + std::to_string(line_no) +
                            ": cannot parse value '" + num + "'");
}

Value parse_value(std::string_view text, int line_no) {
    text = strip(text);
    if (!text.empty() && text.front() == '[') {
        if (text.back() != ']') {
            throw InvalidInputError("config line " + std::to_string(line_no) +
                                    ": unterminated array");
        }
        Array items;
        std::string_view body = text.substr(1, text.size() - 2);
        std::size_t start = 0;
        bool in_string = false;
        for (std::size_t i = 0; i <= body.size(); ++i) {
            if (i < body.size() && body[i] == '"') in_string = !in_string;
            if (i == body.size() || (body[i] == ',' && !in_string)) {
                const std::string_view piece = strip(body.substr(start, i - start));
                if (!piece.empty()) items.push_back(parse_scalar(piece, line_no));
                start = i + 1;
            }
        }
        return Value{std::move(items)};
    }
    return parse_scalar(text, line_no);
}

} // namespace

Table parse(std::string_view text) {
    Table table;
    std::string prefix;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t eol = text.find('\n', pos);
        std::string_view line =
            text.substr(pos, (eol == std::string_view::npos ? text.size() : eol) - pos);
        pos = (eol == std::string_view::npos) ? text.size() + 1 : eol + 1;
        ++line_no;

        line = strip(strip_comment(line));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']' || line.size() < 3) {
                throw InvalidInputError("config line " + std::to_string(line_no) +
                                        ": malformed table header");
            }
            prefix = std::string(strip(line.substr(1, line.size() - 2)));
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw InvalidInputError("config line " + std::to_string(line_no) +
                                    ": expected key = value");
        }
        std::string key(strip(line.substr(0, eq)));
        if (key.empty()) {
            throw InvalidInputError("config line " + std::to_string(line_no) +
                                    ": empty key");
        }
        if (!prefix.empty()) key = prefix + "." + key;
        if (table.count(key)) {
            throw InvalidInputError("config line " + std::to_string(line_no) +
                                    ": duplicate key '" + key + "'");
        }
        table.emplace(std::move(key), parse_value(line.substr(eq + 1), line_no));
    }
    return table;
}

Table parse_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw InvalidInputError("cannot open config file: " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

} // namespace toml_lite

MethodSpec parse_method_token(std::string_view token) {
    std::string lower(token);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return std::tolower(c); });

    MethodSpec spec;
    spec.name = lower;
    if (lower == "powell") {
        spec.baseline = BaselineKind::Powell;
        return spec;
    }
    if (lower == "lbfgs" || lower == "l-bfgs") {
        spec.baseline = BaselineKind::Lbfgs;
        spec.name = "lbfgs";
        return spec;
    }

    std::string base = lower;
    std::string suffix;
    const std::size_t dash = lower.find('-');
    if (dash != std::string::npos) {
        base = lower.substr(0, dash);
        suffix = lower.substr(dash + 1);
    }
    if (base == "jacobi1") {
        spec.schedule = ScheduleKind::Jacobi1;
    } else if (base == "jacobi2") {
        spec.schedule = ScheduleKind::Jacobi2;
    } else if (base == "jacobia") {
        spec.schedule = ScheduleKind::JacobiA;
    } else if (base == "jacobib") {
        spec.schedule = ScheduleKind::JacobiB;
    } else {
        throw InvalidInputError("unknown method '" + std::string(token) + "'");
    }

    if (suffix.empty()) {
        spec.accelerator = Accelerator::None;
    } else if (suffix == "rand" || suffix == "random") {
        spec.randomize = true;
    } else if (suffix == "anderson") {
        spec.accelerator = Accelerator::Anderson;
    } else if (suffix == "pulay") {
        spec.accelerator = Accelerator::Pulay;
    } else {
        // covers rejected combinations such as "jacobi1-rand-pulay"
        throw InvalidInputError("unknown or invalid method variant '" +
                                std::string(token) +
                                "' (pivot randomization cannot be combined with "
                                "DIIS acceleration)");
    }
    return spec;
}

ExperimentConfig experiment_config_from_table(const toml_lite::Table& table) {
    ExperimentConfig config;

    auto get = [&table](const std::string& key) -> const toml_lite::Value* {
        const auto it = table.find(key);
        return it == table.end() ? nullptr : &it->second;
    };

    if (const auto* v = get("problem.hamiltonian")) {
        std::string kind = v->as_string();
        std::transform(kind.begin(), kind.end(), kind.begin(),
                       [](unsigned char c) { return std::tolower(c); });
        if (kind == "tfim") {
            TfimParams p;
            if (const auto* j = get("problem.J")) p.coupling = j->as_double();
            if (const auto* h = get("problem.h")) p.field = h->as_double();
            config.problem.hamiltonian = p;
        } else if (kind == "heisenberg") {
            HeisenbergParams p;
            if (const auto* jx = get("problem.Jx")) p.jx = jx->as_double();
            if (const auto* jy = get("problem.Jy")) p.jy = jy->as_double();
            if (const auto* jz = get("problem.Jz")) p.jz = jz->as_double();
            config.problem.hamiltonian = p;
        } else if (kind == "random") {
            RandomPauliParams p;
            if (const auto* t = get("problem.n_terms")) {
                p.n_terms = static_cast<int>(t->as_int());
            }
            if (const auto* s = get("problem.seed")) {
                p.seed = static_cast<std::uint64_t>(s->as_int());
            }
            config.problem.hamiltonian = p;
        } else {
            throw InvalidInputError("unknown hamiltonian '" + kind + "'");
        }
    }
    if (const auto* v = get("problem.n_qubits")) {
        config.problem.n_qubits = static_cast<int>(v->as_int());
    }
    if (const auto* v = get("problem.entangler_layers")) {
        config.problem.entangler_layers = static_cast<int>(v->as_int());
    }
    if (const auto* v = get("problem.n_references")) {
        config.problem.n_references = static_cast<int>(v->as_int());
    }
    if (const auto* v = get("problem.initial_params")) {
        for (const auto& item : v->as_array()) {
            config.problem.initial_params.push_back(item.as_double());
        }
    }

    if (const auto* v = get("methods")) {
        for (const auto& item : v->as_array()) {
            config.methods.push_back(parse_method_token(item.as_string()));
        }
    }
    if (config.methods.empty()) {
        throw InvalidInputError("config: no methods listed");
    }

    if (const auto* v = get("sweep.max_iterations")) {
        config.sweep.max_iterations = static_cast<int>(v->as_int());
    }
    if (const auto* v = get("sweep.grad_tolerance")) {
        config.sweep.grad_tolerance = v->as_double();
    }
    if (const auto* v = get("sweep.reuse_center")) {
        config.sweep.reuse_center = v->as_bool();
    }
    if (const auto* v = get("sweep.rand_seed")) {
        config.rand_seed = static_cast<std::uint64_t>(v->as_int());
    }

    if (const auto* v = get("diis.capacity")) {
        config.accel.history_capacity = static_cast<std::size_t>(v->as_int());
    }
    if (const auto* v = get("diis.flush_period")) {
        config.accel.flush_period = static_cast<int>(v->as_int());
    }

    config.powell.max_iterations = config.sweep.max_iterations;
    config.powell.grad_tolerance = config.sweep.grad_tolerance;
    config.lbfgs.max_iterations = config.sweep.max_iterations;
    config.lbfgs.grad_tolerance = config.sweep.grad_tolerance;
    if (const auto* v = get("lbfgs.memory")) {
        config.lbfgs.memory = static_cast<int>(v->as_int());
    }

    if (const auto* v = get("output.directory")) config.output_dir = v->as_string();
    if (const auto* v = get("output.record_wall_time")) {
        config.record_wall_time = v->as_bool();
    }
    return config;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
    return experiment_config_from_table(toml_lite::parse_file(path));
}

} // namespace vqopt
