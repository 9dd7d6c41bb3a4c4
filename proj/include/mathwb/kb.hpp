#pragma once

// Local Wikibase-style item store.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "json.hpp"
#include "mathwb/qid.hpp"
#include "mathwb/tex.hpp"

namespace mathwb::kb {

struct SiteLink {
    std::string title;
    std::optional<std::string> section;  // anchor of a section redirect
    friend bool operator==(const SiteLink&, const SiteLink&) = default;
};

/// A `has part` annotation: `fragment` is the TeX of the sub-term that
/// `part_qid` describes.
struct PartStatement {
    Qid part_qid;
    std::string fragment;
    friend bool operator==(const PartStatement&, const PartStatement&) = default;
};

struct Item {
    Qid qid;
    std::map<std::string, std::string> labels;        // language -> text
    std::map<std::string, std::string> descriptions;  // language -> text
    std::vector<Qid> instance_of;
    std::optional<std::string> defining_formula;
    std::vector<PartStatement> parts;
    std::vector<Qid> subclass_of;
    std::map<std::string, SiteLink> sitelinks;  // wiki code ("enwiki") -> link

    friend bool operator==(const Item&, const Item&) = default;
};

enum class KbErrorCode {
    ParseError,
    DuplicateQid,
    InvalidFragment,
    InvalidFormula,
    UnknownQid,
    DuplicatePart,
    NoLabel,
    Io,
};

class KbError : public std::runtime_error {
public:
    KbError(KbErrorCode code, std::string message, std::optional<std::size_t> line = std::nullopt);

    KbErrorCode code() const noexcept { return code_; }
    /// 1-based snapshot line for ParseError.
    std::optional<std::size_t> line() const noexcept { return line_; }

private:
    KbErrorCode code_;
    std::optional<std::size_t> line_;
};

/// Lower-case BCP-47 style tag: "en", "de", "zh-hans".
bool is_language_code(std::string_view code);

struct LocalizedText {
    std::string text;
    std::string lang;  // language the text was actually found in
    friend bool operator==(const LocalizedText&, const LocalizedText&) = default;
};

/// Requested language, then "en", then the lexicographically smallest
/// available language.
std::optional<LocalizedText> pick_language(const std::map<std::string, std::string>& texts,
                                           std::string_view lang);

/// Throws KbError(NoLabel) when the item has no labels at all.
LocalizedText label_for(const Item& item, std::string_view lang);
std::optional<LocalizedText> description_for(const Item& item, std::string_view lang);

nlohmann::ordered_json item_to_json(const Item& item);
/// Throws KbError(ParseError) on schema violations.
Item item_from_json(const nlohmann::json& j);

/// Immutable, validated set of items with a defining-formula index.
class Snapshot {
public:
    Snapshot() = default;
    /// Throws DuplicateQid, InvalidFragment or InvalidFormula.
    explicit Snapshot(std::vector<Item> items);

    const Item* get_item(const Qid& qid) const;
    std::size_t size() const noexcept { return items_.size(); }
    const std::map<Qid, Item>& items() const noexcept { return items_; }

    /// Item whose defining formula has the same canonical hash and tree;
    /// the smallest qid on ties.
    std::optional<Qid> lookup_by_formula(const tex::FormulaAst& formula) const;
    /// Parses `tex` first; parse errors propagate as tex::TexError.
    std::optional<Qid> lookup_by_formula(std::string_view tex) const;

    /// Copy with `item` inserted or replaced.
    Snapshot with_item(Item item) const;

    friend bool operator==(const Snapshot& a, const Snapshot& b) { return a.items_ == b.items_; }

private:
    std::map<Qid, Item> items_;
    std::unordered_map<std::uint64_t, std::vector<std::pair<Qid, tex::MathNode>>> formula_index_;
};

/// JSON Lines, one item per line. Blank lines are skipped.
Snapshot read_snapshot(std::istream& in);
Snapshot load_snapshot(const std::filesystem::path& path);
void write_snapshot(const Snapshot& snapshot, std::ostream& out);
/// Writes a temporary sibling file and renames it over `path`.
void save_snapshot(const Snapshot& snapshot, const std::filesystem::path& path);

enum class LinkVia { Direct, Subclass };

struct ResolvedLink {
    std::string url_path;  // "/wiki/Title#Section"
    LinkVia via;
    Qid target;  // item whose sitelink was used
    friend bool operator==(const ResolvedLink&, const ResolvedLink&) = default;
};

std::string article_path(const SiteLink& link);

/// Direct sitelink, else breadth-first over subclass_of edges (qid order
/// within each level, at most `max_depth` levels).
std::optional<ResolvedLink> resolve_article_link(const Item& item, std::string_view wiki,
                                                 const Snapshot& store, int max_depth = 3);

/// Thread-safe holder of the current snapshot. Readers take a shared
/// pointer to an immutable snapshot; put_part is serialized and publishes a
/// new snapshot only after it has been persisted.
class KnowledgeBase {
public:
    explicit KnowledgeBase(Snapshot snapshot, std::optional<std::filesystem::path> path = std::nullopt);
    static std::shared_ptr<KnowledgeBase> open(const std::filesystem::path& path);

    std::shared_ptr<const Snapshot> snapshot() const;
    /// Incremented by every successful write.
    std::uint64_t version() const;

    /// Throws UnknownQid, InvalidFragment or DuplicatePart. Duplicates are
    /// detected by canonical hash of the fragment plus part qid.
    Item put_part(const Qid& qid, std::string_view fragment, const Qid& part_qid);

private:
    mutable std::mutex read_mu_;
    std::mutex write_mu_;
    std::shared_ptr<const Snapshot> current_;
    std::uint64_t version_ = 0;
    std::optional<std::filesystem::path> path_;
};

}  // namespace mathwb::kb
