#pragma once

// Client for a Wikibase REST-style endpoint: GET {base}/entities/items/{qid}.

#include <chrono>
#include <stdexcept>
#include <string>
#include <string_view>

#include "json.hpp"
#include "mathwb/kb.hpp"

namespace mathwb::kb {

/// Property ids used to read statements; these are deployment settings.
struct PropertyConfig {
    std::string has_part = "P527";
    std::string defining_formula = "P2534";
    std::string instance_of = "P31";
    std::string subclass_of = "P279";
    /// Qualifier on a has-part statement carrying the fragment TeX.
    std::string fragment_qualifier = "P7235";
};

enum class RemoteErrorCode { NetworkError, NotFound, MappingError };

class RemoteError : public std::runtime_error {
public:
    RemoteError(RemoteErrorCode code, std::string message)
        : std::runtime_error(std::move(message)), code_(code) {}
    RemoteErrorCode code() const noexcept { return code_; }

private:
    RemoteErrorCode code_;
};

/// Maps a Wikibase item document to an Item. Throws RemoteError(MappingError).
Item map_wikibase_item(const nlohmann::json& doc, const PropertyConfig& props = {});

/// Throws RemoteError. Only plain http endpoints are supported.
Item fetch_remote(const Qid& qid, std::string_view endpoint_url, const PropertyConfig& props = {},
                  std::chrono::milliseconds timeout = std::chrono::milliseconds(5000));

}  // namespace mathwb::kb
