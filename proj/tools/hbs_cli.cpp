#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "hbs/driver.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw hbs::io_error("cannot open " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_file(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw hbs::io_error("cannot write " + path.string());
    out << text;
}

hbs::SpaceConfig space_from_json_text(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw hbs::io_error(std::string("config parse: ") + e.what());
    }
    hbs::SpaceConfig cfg;
    try {
        const json& src = doc.contains("config") ? doc["config"] : doc;
        cfg.m = src.at("m").get<hbs::Index>();
        cfg.n = src.at("n").get<hbs::Index>();
        cfg.d = src.at("d").get<hbs::Index>();
        cfg.g = src.at("g").get<hbs::Index>();
    } catch (const json::exception& e) {
        throw hbs::io_error(std::string("config parse: ") + e.what());
    }
    cfg.validate();
    return cfg;
}

hbs::AuditLevel audit_from_string(const std::string& name) {
    if (name == "none") return hbs::AuditLevel::none;
    if (name == "fast") return hbs::AuditLevel::fast;
    if (name == "oracle") return hbs::AuditLevel::oracle;
    throw hbs::config_error("unknown audit level: " + name);
}

int run_command(const std::string& config_path, const std::string& output_dir,
                const std::string& audit_override) {
    hbs::RunConfig config = hbs::run_config_from_json(read_file(config_path));
    if (!audit_override.empty()) config.audit = audit_from_string(audit_override);
    hbs::RunLog log = hbs::run(config);
    fs::path out(output_dir.empty() ? "." : output_dir);
    write_file(out / "run_log.jsonl", log.to_jsonl());
    write_file(out / "summary.json", log.summary_json());
    write_file(out / "final_lineage.json", log.final_lineage_json);
    {
        std::ostringstream os;
        os.precision(17);
        for (size_t i = 0; i < log.step_wall_ms.size(); ++i)
            os << "{\"step\":" << i << ",\"wall_ms\":" << log.step_wall_ms[i] << "}\n";
        write_file(out / "timing.jsonl", os.str());
    }
    std::cout << log.summary_json() << "\n";
    return log.depth_capped ? 3 : 0;
}

int verify_command(const std::string& lineage_path, const std::string& level) {
    hbs::Lineage lin = hbs::lineage_from_json(read_file(lineage_path));
    hbs::VerifyReport rep = hbs::verify_lineage(lin, audit_from_string(level));
    std::cout << rep.to_json() << "\n";
    return rep.pass ? 0 : 1;
}

int sample_command(const std::string& lineage_path, int resolution,
                   const std::string& output_path) {
    hbs::Lineage lin = hbs::lineage_from_json(read_file(lineage_path));
    std::string csv = hbs::sample_grid(lin, resolution);
    if (output_path.empty())
        std::cout << csv;
    else
        write_file(output_path, csv);
    return 0;
}

int convert_command(const std::string& input_path, const std::string& output_path) {
    hbs::Lineage lin = hbs::lineage_from_json(read_file(input_path));
    hbs::Lineage out = hbs::to_absorbing_gap_controlled(lin);
    write_file(output_path, hbs::to_json(out));
    return 0;
}

int constants_command(const std::string& config_path) {
    hbs::SpaceConfig cfg = space_from_json_text(read_file(config_path));
    hbs::ComplexityConstants c = hbs::complexity_constants(cfg);
    json doc;
    doc["A"] = c.A;
    doc["B"] = c.B;
    doc["D"] = c.D;
    doc["locality"] = c.locality;
    doc["locality_alt"] = c.locality_alt;
    doc["C_U"] = c.C_U;
    doc["C_L"] = c.C_L;
    doc["C_U_over_C_L"] = c.C_U / c.C_L;
    std::cout << doc.dump() << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Adaptive hierarchical B-spline refinement driver"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    std::string output_dir;
    std::string audit;
    app.add_option("--config", config_path, "JSON configuration file");
    app.add_option("--output", output_dir, "output directory or file");
    app.add_option("--audit", audit, "audit level: none, fast or oracle");

    CLI::App* cmd_run = app.add_subcommand("run", "run an adaptive refinement loop");

    std::string lineage_path;
    std::string level = "fast";
    CLI::App* cmd_verify = app.add_subcommand("verify", "check a stored lineage");
    cmd_verify->add_option("lineage", lineage_path, "lineage JSON file")->required();
    cmd_verify->add_option("--level", level, "fast or oracle");

    std::string sample_path;
    int resolution = 0;
    CLI::App* cmd_sample = app.add_subcommand("sample", "evaluate a lineage on a grid");
    cmd_sample->add_option("lineage", sample_path, "lineage JSON file")->required();
    cmd_sample->add_option("--resolution", resolution, "grid points per axis")->required();

    std::string convert_in, convert_out;
    CLI::App* cmd_convert =
        app.add_subcommand("convert", "rebuild as an absorbing gap-controlled lineage");
    cmd_convert->add_option("input", convert_in, "input lineage JSON file")->required();
    cmd_convert->add_option("output", convert_out, "output lineage JSON file")->required();

    CLI::App* cmd_constants =
        app.add_subcommand("constants", "print the complexity constants for a configuration");

    try {
        app.parse(argc, argv);
        if (cmd_run->parsed()) {
            if (config_path.empty()) throw hbs::config_error("run needs --config");
            return run_command(config_path, output_dir, audit);
        }
        if (cmd_verify->parsed()) return verify_command(lineage_path, level);
        if (cmd_sample->parsed()) return sample_command(sample_path, resolution, output_dir);
        if (cmd_convert->parsed()) return convert_command(convert_in, convert_out);
        if (cmd_constants->parsed()) {
            if (config_path.empty()) throw hbs::config_error("constants needs --config");
            return constants_command(config_path);
        }
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const hbs::size_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const hbs::depth_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const hbs::error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
