#include "fermi/cli/scenario_file.hpp"

#include <fmt/format.h>

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace fermi::cli {

std::uint64_t fnv1a(std::string_view bytes) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::size_t line_of_offset(const std::string& text, std::size_t offset) {
    offset = std::min(offset, text.size());
    std::size_t line = 1;
    for (std::size_t i = 0; i < offset; ++i) {
        if (text[i] == '\n') ++line;
    }
    return line;
}

namespace {

std::string escape_pointer_token(std::string_view key) {
    std::string out;
    for (char c : key) {
        if (c == '~') out += "~0";
        else if (c == '/') out += "~1";
        else out += c;
    }
    return out;
}

// Best effort: the first occurrence of the last pointer token as a quoted key.
std::size_t guess_line(const std::string* source, const std::string& pointer) {
    if (source == nullptr || pointer.empty()) return 0;
    const auto slash = pointer.rfind('/');
    std::string token = pointer.substr(slash + 1);
    if (!token.empty() && token.find_first_not_of("0123456789") == std::string::npos) {
        // array element: fall back to the enclosing key
        const std::string parent = pointer.substr(0, slash);
        return guess_line(source, parent);
    }
    const auto pos = source->find("\"" + token + "\"");
    return pos == std::string::npos ? 0 : line_of_offset(*source, pos);
}

}  // namespace

Node::Node(const json& value, std::string pointer, const std::string* source)
    : value_(&value), pointer_(std::move(pointer)), source_(source) {}

void Node::fail(const std::string& message) const {
    const std::string where = pointer_.empty() ? "/" : pointer_;
    const std::size_t line = guess_line(source_, pointer_);
    if (line > 0) throw SchemaError(fmt::format("schema error at {} (line {}): {}", where, line, message));
    throw SchemaError(fmt::format("schema error at {}: {}", where, message));
}

void Node::expect_object() const {
    if (!value_->is_object()) fail("expected an object");
}

void Node::expect_array() const {
    if (!value_->is_array()) fail("expected an array");
}

bool Node::has(std::string_view key) const {
    return value_->is_object() && value_->contains(std::string(key));
}

Node Node::at(std::string_view key) const {
    expect_object();
    const auto it = value_->find(std::string(key));
    if (it == value_->end()) fail(fmt::format("missing required member \"{}\"", key));
    return Node(*it, pointer_ + "/" + escape_pointer_token(key), source_);
}

Node Node::at(std::size_t index) const {
    expect_array();
    if (index >= value_->size()) fail(fmt::format("index {} out of range", index));
    return Node((*value_)[index], pointer_ + "/" + std::to_string(index), source_);
}

std::size_t Node::size() const {
    expect_array();
    return value_->size();
}

double Node::number() const {
    if (!value_->is_number()) fail("expected a number");
    const double v = value_->get<double>();
    if (!std::isfinite(v)) fail("expected a finite number");
    return v;
}

long long Node::integer() const {
    if (value_->is_number_integer()) return value_->get<long long>();
    if (value_->is_number_float()) {
        const double v = value_->get<double>();
        if (std::isfinite(v) && v == std::floor(v) && std::abs(v) < 9e15) return static_cast<long long>(v);
    }
    fail("expected an integer");
}

std::size_t Node::count() const {
    const long long v = integer();
    if (v < 0) fail("expected a non-negative integer");
    return static_cast<std::size_t>(v);
}

bool Node::boolean() const {
    if (!value_->is_boolean()) fail("expected true or false");
    return value_->get<bool>();
}

std::string Node::string() const {
    if (!value_->is_string()) fail("expected a string");
    return value_->get<std::string>();
}

double Node::number_or(std::string_view key, double fallback) const { return has(key) ? at(key).number() : fallback; }
long long Node::integer_or(std::string_view key, long long fallback) const { return has(key) ? at(key).integer() : fallback; }
bool Node::boolean_or(std::string_view key, bool fallback) const { return has(key) ? at(key).boolean() : fallback; }
std::string Node::string_or(std::string_view key, std::string fallback) const {
    return has(key) ? at(key).string() : fallback;
}

void Node::allow_keys(std::initializer_list<std::string_view> keys) const {
    expect_object();
    for (const auto& [name, v] : value_->items()) {
        bool known = false;
        for (auto k : keys) known = known || k == name;
        if (!known) Node(v, pointer_ + "/" + escape_pointer_token(name), source_).fail(fmt::format("unknown member \"{}\"", name));
    }
}

// ---------------------------------------------------------------- scenario

OpeningFunction parse_opening(const Node& node) {
    node.expect_object();
    const std::string type = node.at("type").string();
    try {
        if (type == "constant") {
            node.allow_keys({"type"});
            return OpeningFunction::constant();
        }
        if (type == "sin2") {
            node.allow_keys({"type", "window"});
            return OpeningFunction::sin_sq_window(node.at("window").number());
        }
        if (type == "cos2") {
            node.allow_keys({"type", "window"});
            return OpeningFunction::cos_sq_window(node.at("window").number());
        }
        if (type == "exp_ramp") {
            node.allow_keys({"type", "tau", "inner"});
            const OpeningFunction inner = node.has("inner") ? parse_opening(node.at("inner")) : OpeningFunction::constant();
            return OpeningFunction::exp_ramp(node.at("tau").number(), inner);
        }
    } catch (const InvalidParameters& e) {
        node.fail(e.what());
    } catch (const UnsupportedConfiguration& e) {
        node.fail(e.what());
    }
    node.at("type").fail(fmt::format("unknown opening type \"{}\" (expected constant, sin2, cos2 or exp_ramp)", type));
}

Node ScenarioFile::run() const {
    const Node r = root();
    if (!r.has("run")) {
        static const json empty = json::object();
        return Node(empty, "/run", &source);
    }
    return r.at("run");
}

std::string ScenarioFile::hash() const {
    return fmt::format("{:016x}", fnv1a(document.dump()));
}

ScenarioFile parse_scenario_text(const std::string& text, const std::string& label) {
    ScenarioFile file;
    file.path = label;
    file.source = text;
    try {
        file.document = json::parse(text);
    } catch (const json::parse_error& e) {
        throw SchemaError(fmt::format("{}: malformed JSON at line {}: {}", label, line_of_offset(text, e.byte > 0 ? e.byte - 1 : 0),
                                      e.what()));
    }

    const Node root = file.root();
    root.expect_object();
    root.allow_keys({"system", "scenario", "run", "description"});

    const Node system = root.at("system");
    system.allow_keys({"kind", "chain", "trap"});
    const std::string kind = system.at("kind").string();
    if (kind == "chain") {
        if (system.has("trap")) system.at("trap").fail("a chain system must not carry a \"trap\" block");
        const Node c = system.at("chain");
        c.allow_keys({"n_sites", "length", "pinning", "speed"});
        ChainParams p;
        p.n_sites = c.at("n_sites").count();
        p.length = c.number_or("length", 1.0);
        p.pinning = c.number_or("pinning", 1.0);
        p.speed = c.number_or("speed", 1.0);
        try {
            p.validate();
        } catch (const InvalidParameters& e) {
            c.fail(e.what());
        }
        file.kind = BasisKind::HarmonicChain;
        file.chain = p;
    } else if (kind == "trap") {
        if (system.has("chain")) system.at("chain").fail("a trap system must not carry a \"chain\" block");
        const Node t = system.at("trap");
        t.allow_keys({"n_ions", "base_frequency"});
        TrapParams p;
        p.n_ions = t.at("n_ions").count();
        p.base_frequency = t.number_or("base_frequency", 1.0);
        try {
            p.validate();
        } catch (const InvalidParameters& e) {
            t.fail(e.what());
        }
        file.kind = BasisKind::IonTrap;
        file.trap = p;
    } else {
        system.at("kind").fail(fmt::format("unknown system kind \"{}\" (expected chain or trap)", kind));
    }

    Scenario& s = file.scenario;
    const std::size_t n_sites = file.chain ? file.chain->n_sites : file.trap->n_ions;
    if (root.has("scenario")) {
        const Node sc = root.at("scenario");
        sc.allow_keys({"site_a", "site_b", "omega", "omega_a", "omega_b", "epsilon", "opening", "opening_a", "opening_b",
                       "duration"});
        s.site_a = sc.has("site_a") ? sc.at("site_a").count() : 0;
        s.site_b = sc.has("site_b") ? sc.at("site_b").count() : 1;
        const double omega = sc.number_or("omega", 2.0);
        s.omega_a = sc.number_or("omega_a", omega);
        s.omega_b = sc.number_or("omega_b", omega);
        s.epsilon = sc.number_or("epsilon", 1.0);
        if (sc.has("opening")) s.opening_a = s.opening_b = parse_opening(sc.at("opening"));
        if (sc.has("opening_a")) s.opening_a = parse_opening(sc.at("opening_a"));
        if (sc.has("opening_b")) s.opening_b = parse_opening(sc.at("opening_b"));
        s.duration = sc.number_or("duration", std::min(s.opening_a.support_end(), s.opening_b.support_end()));
        if (!std::isfinite(s.duration)) s.duration = 1.0;
        try {
            s.validate(n_sites);
        } catch (const std::exception& e) {
            sc.fail(e.what());
        }
    } else {
        s.validate(n_sites);
    }
    return file;
}

ScenarioFile load_scenario_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw SchemaError(fmt::format("cannot open scenario file \"{}\"", path));
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario_text(buf.str(), path);
}

ModeBasis build_basis(const ScenarioFile& file) {
    if (file.chain) return build_harmonic_chain(*file.chain);
    return build_ion_trap(*file.trap);
}

ModeBasis build_basis(const ScenarioFile& file, std::size_t n_sites_override) {
    if (!file.chain) throw SchemaError("size sweeps are only defined for chain systems");
    ChainParams p = *file.chain;
    p.n_sites = n_sites_override;
    return build_harmonic_chain(p);
}

}  // namespace fermi::cli
