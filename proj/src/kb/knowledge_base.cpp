#include "mathwb/kb.hpp"

namespace mathwb::kb {

KnowledgeBase::KnowledgeBase(Snapshot snapshot, std::optional<std::filesystem::path> path)
    : current_(std::make_shared<const Snapshot>(std::move(snapshot))), path_(std::move(path)) {}

std::shared_ptr<KnowledgeBase> KnowledgeBase::open(const std::filesystem::path& path) {
    return std::make_shared<KnowledgeBase>(load_snapshot(path), path);
}

std::shared_ptr<const Snapshot> KnowledgeBase::snapshot() const {
    std::lock_guard lock(read_mu_);
    return current_;
}

std::uint64_t KnowledgeBase::version() const {
    std::lock_guard lock(read_mu_);
    return version_;
}

Item KnowledgeBase::put_part(const Qid& qid, std::string_view fragment, const Qid& part_qid) {
    std::lock_guard writer(write_mu_);
    const std::shared_ptr<const Snapshot> base = snapshot();

    const Item* existing = base->get_item(qid);
    if (!existing) throw KbError(KbErrorCode::UnknownQid, "unknown qid " + qid.str());

    std::uint64_t key = 0;
    try {
        key = tex::canonical_hash(tex::parse(fragment));
    } catch (const tex::TexError& e) {
        throw KbError(KbErrorCode::InvalidFragment, "invalid fragment '" + std::string(fragment) + "': " + e.what());
    }

    for (const auto& part : existing->parts) {
        if (part.part_qid == part_qid && tex::canonical_hash(tex::parse(part.fragment)) == key) {
            throw KbError(KbErrorCode::DuplicatePart,
                          qid.str() + " already has part " + part_qid.str() + " for '" + part.fragment + "'");
        }
    }

    Item updated = *existing;
    updated.parts.push_back(PartStatement{part_qid, std::string(fragment)});
    auto next = std::make_shared<const Snapshot>(base->with_item(updated));
    if (path_) save_snapshot(*next, *path_);

    std::lock_guard lock(read_mu_);
    current_ = std::move(next);
    ++version_;
    return updated;
}

}  // namespace mathwb::kb
