#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "mathwb/kb.hpp"

namespace mathwb::kb {

Snapshot::Snapshot(std::vector<Item> items) {
    for (auto& item : items) {
        for (const auto& part : item.parts) {
            try {
                tex::parse(part.fragment);
            } catch (const tex::TexError& e) {
                throw KbError(KbErrorCode::InvalidFragment,
                              item.qid.str() + ": invalid fragment '" + part.fragment + "': " + e.what());
            }
        }
        if (item.defining_formula) {
            try {
                tex::FormulaAst ast = tex::parse(*item.defining_formula);
                formula_index_[tex::canonical_hash(ast)].emplace_back(item.qid, std::move(ast.root));
            } catch (const tex::TexError& e) {
                throw KbError(KbErrorCode::InvalidFormula, item.qid.str() + ": invalid defining formula '" +
                                                                *item.defining_formula + "': " + e.what());
            }
        }
        const Qid qid = item.qid;
        if (!items_.emplace(qid, std::move(item)).second) {
            throw KbError(KbErrorCode::DuplicateQid, "duplicate qid " + qid.str());
        }
    }
}

const Item* Snapshot::get_item(const Qid& qid) const {
    auto it = items_.find(qid);
    return it == items_.end() ? nullptr : &it->second;
}

std::optional<Qid> Snapshot::lookup_by_formula(const tex::FormulaAst& formula) const {
    const tex::MathNode root = tex::normalize(formula.root);
    auto it = formula_index_.find(tex::fnv1a64(tex::canonical_tex(root)));
    if (it == formula_index_.end()) return std::nullopt;
    std::optional<Qid> best;
    for (const auto& [qid, tree] : it->second) {
        if (tree == root && (!best || qid < *best)) best = qid;
    }
    return best;
}

std::optional<Qid> Snapshot::lookup_by_formula(std::string_view tex) const {
    return lookup_by_formula(tex::parse(tex));
}

Snapshot Snapshot::with_item(Item item) const {
    std::vector<Item> items;
    items.reserve(items_.size() + 1);
    bool replaced = false;
    for (const auto& [qid, existing] : items_) {
        if (qid == item.qid) {
            items.push_back(item);
            replaced = true;
        } else {
            items.push_back(existing);
        }
    }
    if (!replaced) items.push_back(std::move(item));
    return Snapshot(std::move(items));
}

Snapshot read_snapshot(std::istream& in) {
    std::vector<Item> items;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            items.push_back(item_from_json(nlohmann::json::parse(line)));
        } catch (const nlohmann::json::exception& e) {
            throw KbError(KbErrorCode::ParseError, e.what(), line_no);
        } catch (const KbError& e) {
            throw KbError(KbErrorCode::ParseError, e.what(), line_no);
        }
    }
    return Snapshot(std::move(items));
}

Snapshot load_snapshot(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw KbError(KbErrorCode::Io, "cannot open snapshot " + path.string());
    return read_snapshot(in);
}

void write_snapshot(const Snapshot& snapshot, std::ostream& out) {
    for (const auto& [qid, item] : snapshot.items()) out << item_to_json(item).dump() << '\n';
}

void save_snapshot(const Snapshot& snapshot, const std::filesystem::path& path) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw KbError(KbErrorCode::Io, "cannot write " + tmp.string());
        write_snapshot(snapshot, out);
        out.flush();
        if (!out) throw KbError(KbErrorCode::Io, "write failed for " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw KbError(KbErrorCode::Io, "cannot replace " + path.string() + ": " + ec.message());
}

}  // namespace mathwb::kb
