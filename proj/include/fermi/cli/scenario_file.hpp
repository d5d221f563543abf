// JSON scenario documents: parsing, schema checks with line numbers, hashing

#pragma once

#include "fermi/errors.hpp"
#include "fermi/mode_core.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <initializer_list>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fermi::cli {

using json = nlohmann::json;

// Malformed file, missing/unknown keys, wrong types, bad values: exit code 2.
struct SchemaError : Error {
    using Error::Error;
};

// Read-only view of a JSON value that remembers its pointer and can map it back to a source line.
class Node {
public:
    Node(const json& value, std::string pointer, const std::string* source);

    const json& value() const noexcept { return *value_; }
    const std::string& pointer() const noexcept { return pointer_; }

    bool has(std::string_view key) const;
    Node at(std::string_view key) const;   // required member
    Node at(std::size_t index) const;
    std::size_t size() const;

    double number() const;
    long long integer() const;
    std::size_t count() const;             // non-negative integer
    bool boolean() const;
    std::string string() const;

    double number_or(std::string_view key, double fallback) const;
    long long integer_or(std::string_view key, long long fallback) const;
    bool boolean_or(std::string_view key, bool fallback) const;
    std::string string_or(std::string_view key, std::string fallback) const;

    void expect_object() const;
    void expect_array() const;
    // Unknown members are schema errors.
    void allow_keys(std::initializer_list<std::string_view> keys) const;

    [[noreturn]] void fail(const std::string& message) const;

private:
    const json* value_;
    std::string pointer_;
    const std::string* source_;
};

struct ScenarioFile {
    std::string path;
    std::string source;       // raw text
    json document;
    BasisKind kind{BasisKind::HarmonicChain};
    std::optional<ChainParams> chain;
    std::optional<TrapParams> trap;
    Scenario scenario;

    Node root() const { return Node(document, "", &source); }
    Node run() const;
    // FNV-1a over the canonical (key-sorted, compact) serialization.
    std::string hash() const;
};

ScenarioFile load_scenario_file(const std::string& path);
ScenarioFile parse_scenario_text(const std::string& text, const std::string& label = "<memory>");

// Basis for the file's system, or a chain with a different size (sweeps).
ModeBasis build_basis(const ScenarioFile& file);
ModeBasis build_basis(const ScenarioFile& file, std::size_t n_sites_override);

OpeningFunction parse_opening(const Node& node);
std::uint64_t fnv1a(std::string_view bytes) noexcept;
// 1-based line of a byte offset.
std::size_t line_of_offset(const std::string& text, std::size_t offset);

}  // namespace fermi::cli
