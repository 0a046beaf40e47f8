#include "dualsrc/io.hpp"

#include <chrono>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "dualsrc/errors.hpp"

namespace dualsrc {

namespace {

void dump_rec(const nlohmann::json& j, std::string& out, int indent) {
    const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
    const std::string pad_in(static_cast<std::size_t>(indent + 1) * 2, ' ');
    switch (j.type()) {
        case nlohmann::json::value_t::object: {
            if (j.empty()) {
                out += "{}";
                return;
            }
            out += "{\n";
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) out += ",\n";
                first = false;
                out += pad_in;
                out += nlohmann::json(it.key()).dump();
                out += ": ";
                dump_rec(it.value(), out, indent + 1);
            }
            out += "\n" + pad + "}";
            return;
        }
        case nlohmann::json::value_t::array: {
            if (j.empty()) {
                out += "[]";
                return;
            }
            out += "[\n";
            bool first = true;
            for (const auto& el : j) {
                if (!first) out += ",\n";
                first = false;
                out += pad_in;
                dump_rec(el, out, indent + 1);
            }
            out += "\n" + pad + "]";
            return;
        }
        case nlohmann::json::value_t::number_float:
            out += format_double(j.get<double>());
            return;
        default:
            out += j.dump();
            return;
    }
}

}  // namespace

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string canonical_dump(const nlohmann::json& j) {
    std::string out;
    dump_rec(j, out, 0);
    out += "\n";
    return out;
}

std::string content_hash(const nlohmann::json& j) {
    const std::string bytes = canonical_dump(j);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
    return buf;
}

nlohmann::json demand_to_json(const DemandDistribution& d) {
    nlohmann::json atoms = nlohmann::json::array();
    for (const auto& [v, p] : d.atoms()) atoms.push_back({v, p});
    return nlohmann::json{{"step", d.step()}, {"atoms", atoms}};
}

DemandDistribution demand_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("step") || !j.contains("atoms"))
        throw DomainError(errc::parse_error, "demand JSON requires {\"step\", \"atoms\"}");
    std::vector<std::pair<double, double>> atoms;
    for (const auto& a : j.at("atoms")) {
        if (!a.is_array() || a.size() != 2)
            throw DomainError(errc::parse_error, "demand atoms must be [value, prob] pairs");
        atoms.emplace_back(a[0].get<double>(), a[1].get<double>());
    }
    return make_demand(j.at("step").get<double>(), atoms);
}

nlohmann::json instance_to_json(const Instance& inst) {
    return nlohmann::json{{"h", inst.h},   {"b", inst.b}, {"c_R", inst.c_R}, {"c_E", inst.c_E},
                          {"L", inst.L},   {"L0", inst.L0}, {"demand", demand_to_json(inst.demand)}};
}

Instance instance_from_json(const nlohmann::json& j) {
    for (const char* key : {"h", "b", "c_R", "c_E", "L", "L0", "demand"})
        if (!j.contains(key))
            throw DomainError(errc::parse_error, std::string("instance JSON missing field ") + key);
    return make_instance(j.at("h").get<double>(), j.at("b").get<double>(), j.at("c_R").get<double>(),
                         j.at("c_E").get<double>(), j.at("L").get<int>(), j.at("L0").get<int>(),
                         demand_from_json(j.at("demand")));
}

Instance load_instance(const std::string& path) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(read_file(path));
    } catch (const nlohmann::json::exception& e) {
        throw DomainError(errc::parse_error, std::string("cannot parse ") + path + ": " + e.what());
    }
    return instance_from_json(j);
}

PolicySpec policy_from_json(const nlohmann::json& j, const Instance& inst, PolicyTable& table_storage) {
    if (!j.is_object() || !j.contains("kind"))
        throw DomainError(errc::parse_error, "policy JSON requires a \"kind\" field");
    const std::string kind = j.at("kind").get<std::string>();
    PolicySpec spec;
    if (kind == "tbs") {
        spec.kind = PolicySpec::Kind::tbs;
        spec.r = j.at("r").get<double>();
        spec.S = j.at("S").get<double>();
    } else if (kind == "constant_order") {
        spec.kind = PolicySpec::Kind::constant_order;
        spec.r = j.at("r").get<double>();
    } else if (kind == "express_base_stock") {
        spec.kind = PolicySpec::Kind::express_base_stock;
        spec.S = j.at("S").get<double>();
    } else if (kind == "table") {
        spec.kind = PolicySpec::Kind::table;
        table_storage = load_policy_csv(j.at("policy_file").get<std::string>(), inst);
        spec.table = &table_storage;
    } else {
        throw DomainError(errc::parse_error, "unknown policy kind: " + kind);
    }
    return spec;
}

void save_policy_csv(const PolicyTable& table, const std::string& path) {
    std::string out;
    const int pd = table.pipeline_dim();
    out += "# step=" + format_double(table.step) + ",L=" + std::to_string(table.L) +
           ",L0=" + std::to_string(table.L0) + ",cap_r=" + std::to_string(table.cap_r_idx) +
           ",cap_e=" + std::to_string(table.cap_e_idx) + ",pos_lo=" + std::to_string(table.pos_lo_idx) +
           ",pos_hi=" + std::to_string(table.pos_hi_idx) + "\n";
    for (int k = 1; k <= pd; ++k) out += "pipe_" + std::to_string(k) + ",";
    out += "position,q_r,q_e\n";
    const std::int64_t n_pos = table.pos_hi_idx - table.pos_lo_idx + 1;
    const std::int64_t base = table.cap_r_idx + 1;
    for (std::size_t s = 0; s < table.state_count(); ++s) {
        std::int64_t code = static_cast<std::int64_t>(s) / n_pos;
        const std::int64_t pos = table.pos_lo_idx + static_cast<std::int64_t>(s) % n_pos;
        std::vector<std::int64_t> pipe(static_cast<std::size_t>(pd));
        for (int k = pd - 1; k >= 0; --k) {
            pipe[static_cast<std::size_t>(k)] = code % base;
            code /= base;
        }
        for (int k = 0; k < pd; ++k)
            out += format_double(static_cast<double>(pipe[static_cast<std::size_t>(k)]) * table.step) + ",";
        out += format_double(static_cast<double>(pos) * table.step) + ",";
        out += format_double(static_cast<double>(table.q_r[s]) * table.step) + ",";
        out += format_double(static_cast<double>(table.q_e[s]) * table.step) + "\n";
    }
    write_file(path, out);
}

PolicyTable load_policy_csv(const std::string& path, const Instance& inst) {
    std::istringstream in(read_file(path));
    std::string line;
    if (!std::getline(in, line) || line.rfind("# step=", 0) != 0)
        throw DomainError(errc::parse_error, "policy CSV missing metadata header");
    PolicyTable t;
    t.step = inst.demand.step();
    {
        std::string meta = line.substr(2);
        std::istringstream ms(meta);
        std::string kv;
        while (std::getline(ms, kv, ',')) {
            const auto eq = kv.find('=');
            const std::string key = kv.substr(0, eq);
            const std::string val = kv.substr(eq + 1);
            if (key == "step") {
                if (std::abs(std::stod(val) - inst.demand.step()) > 1e-12)
                    throw DomainError(errc::state_escape, "policy table lattice step mismatch");
            } else if (key == "L") t.L = std::stoi(val);
            else if (key == "L0") t.L0 = std::stoi(val);
            else if (key == "cap_r") t.cap_r_idx = std::stoll(val);
            else if (key == "cap_e") t.cap_e_idx = std::stoll(val);
            else if (key == "pos_lo") t.pos_lo_idx = std::stoll(val);
            else if (key == "pos_hi") t.pos_hi_idx = std::stoll(val);
        }
    }
    std::getline(in, line);  // column header
    const std::int64_t n_pos = t.pos_hi_idx - t.pos_lo_idx + 1;
    std::int64_t n_pipe = 1;
    for (int i = 0; i < t.pipeline_dim(); ++i) n_pipe *= t.cap_r_idx + 1;
    const std::size_t n_states = static_cast<std::size_t>(n_pipe * n_pos);
    t.q_r.assign(n_states, 0);
    t.q_e.assign(n_states, 0);
    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (row >= n_states) throw DomainError(errc::parse_error, "policy CSV has extra rows");
        std::istringstream ls(line);
        std::string cell;
        std::vector<double> cells;
        while (std::getline(ls, cell, ',')) cells.push_back(std::stod(cell));
        if (static_cast<int>(cells.size()) != t.pipeline_dim() + 3)
            throw DomainError(errc::parse_error, "policy CSV row has wrong arity");
        t.q_r[row] = static_cast<std::uint32_t>(std::llround(cells[cells.size() - 2] / t.step));
        t.q_e[row] = static_cast<std::uint32_t>(std::llround(cells[cells.size() - 1] / t.step));
        ++row;
    }
    if (row != n_states) throw DomainError(errc::parse_error, "policy CSV is missing rows");
    return t;
}

nlohmann::json make_manifest(const std::vector<std::string>& argv_vec, const nlohmann::json& instance_json,
                             const nlohmann::json& tolerances) {
    std::string cmd;
    for (const auto& a : argv_vec) {
        if (!cmd.empty()) cmd += " ";
        cmd += a;
    }
    return nlohmann::json{{"command_line", cmd},
                          {"instance_hash", content_hash(instance_json)},
                          {"tool_version", tool_version},
                          {"tolerances", tolerances}};
}

void write_output(const std::string& path, const nlohmann::json& body, const nlohmann::json* manifest) {
    write_file(path, canonical_dump(body));
    if (manifest) {
        nlohmann::json m = *manifest;
        m["timestamp_utc"] = static_cast<std::int64_t>(
            std::chrono::duration_cast<std::chrono::seconds>(
                std::chrono::system_clock::now().time_since_epoch())
                .count());
        m["output_file"] = path;
        write_file(path + ".manifest.json", canonical_dump(m));
    }
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DomainError(errc::parse_error, "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DomainError(errc::parse_error, "cannot write " + path);
    out << contents;
}

}  // namespace dualsrc
