#include "cli.hpp"

#include "commands.hpp"

#include "aplab/errors.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

namespace aplab::cli {

namespace {

json parse_integer(const std::string& name, const std::string& text) {
    std::uint64_t v = 0;
    const auto* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc() || ptr != end) throw input_error("--" + name + " expects a nonnegative integer, got " + text);
    return v;
}

json parse_real(const std::string& name, const std::string& text) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != text.size() || text.empty()) throw input_error("--" + name + " expects a number, got " + text);
    return v;
}

struct Slot {
    const OptionSpec* spec = nullptr;
    CLI::Option* option = nullptr;
    std::string text;
    std::vector<std::string> list;
    bool flag = false;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw input_error("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void emit(const Output& o, const std::string& path, std::ostream& out) {
    if (path.empty() || path == "-") {
        out << (o.console.empty() ? o.document : o.console);
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw input_error("cannot write " + path);
    f << o.document;
    out << o.console;
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"aplab: prime-pattern experiments at desk scale", "aplab"};
    app.set_version_flag("--version", APLAB_VERSION);
    app.require_subcommand(1);
    std::string out_path;
    app.add_option("--out", out_path, "write the artifact here instead of stdout");

    std::map<std::string, std::vector<Slot>> slots;
    std::map<std::string, CLI::App*> subs;
    for (const CommandSpec& cmd : command_specs()) {
        CLI::App* sub = app.add_subcommand(cmd.name, cmd.help);
        subs[cmd.name] = sub;
        auto& list = slots[cmd.name];
        list.reserve(cmd.options.size());
        for (const OptionSpec& o : cmd.options) {
            list.emplace_back();
            list.back().spec = &o;
            Slot& s = list.back();
            const std::string flag = "--" + o.name;
            switch (o.type) {
            case OptType::flag:
                s.option = sub->add_flag(flag, s.flag, o.help);
                break;
            case OptType::integer_list:
                s.option = sub->add_option(flag, s.list, o.help)->delimiter(',')->type_name("INT");
                break;
            default:
                s.option = sub->add_option(flag, s.text, o.help);
                s.option->type_name(o.type == OptType::integer ? "INT" : o.type == OptType::real ? "REAL" : "TEXT");
                break;
            }
            if (o.required) s.option->required();
            if (o.hidden) s.option->group("");
        }
        for (Slot& s : list) {
            if (s.spec->excludes.empty()) continue;
            for (Slot& t : list) {
                if (t.spec->name == s.spec->excludes) s.option->excludes(t.option);
            }
        }
    }
    std::string rerun_path;
    CLI::App* rerun = app.add_subcommand("rerun", "repeat the experiment recorded in an artifact");
    rerun->add_option("artifact", rerun_path, "JSON document or scan CSV")->required();

    if (argc <= 1) {
        err << app.help();
        return 2;
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        err << app.help();
        return 2;
    }

    try {
        json config;
        if (rerun->parsed()) {
            config = config_from_artifact(read_file(rerun_path));
        } else {
            for (const CommandSpec& cmd : command_specs()) {
                if (!subs[cmd.name]->parsed()) continue;
                config["subcommand"] = cmd.name;
                for (const Slot& s : slots[cmd.name]) {
                    const OptionSpec& o = *s.spec;
                    const bool given = s.option->count() > 0;
                    if (!given) {
                        if (!o.fallback.is_null()) config[o.name] = o.fallback;
                        continue;
                    }
                    switch (o.type) {
                    case OptType::flag: config[o.name] = s.flag; break;
                    case OptType::integer: config[o.name] = parse_integer(o.name, s.text); break;
                    case OptType::real: config[o.name] = parse_real(o.name, s.text); break;
                    case OptType::text: config[o.name] = s.text; break;
                    case OptType::integer_list: {
                        json arr = json::array();
                        for (const auto& t : s.list) arr.push_back(parse_integer(o.name, t));
                        config[o.name] = arr;
                        break;
                    }
                    }
                }
            }
        }
        const Output o = execute(config);
        emit(o, out_path, out);
        if (o.exit_code != 0) err << o.failure;
        return o.exit_code;
    } catch (const invariant_violation& e) {
        err << "invariant failure: " << e.what() << "\n";
        return 3;
    } catch (const input_error& e) {
        err << "input error: " << e.what() << "\n";
        return 2;
    } catch (const resource_error& e) {
        err << "resource limit: " << e.what() << "\n";
        return 2;
    }
}

} // namespace aplab::cli
