#pragma once

#include <string>
#include <vector>

#include "bft/engine.hpp"

namespace bft::session {

/// A persistent working state: a knowledge base plus an operation log.
/// Serialization is JSON with all integers rendered as decimal strings and
/// deterministic key/element ordering, so save(load(save(s))) == save(s)
/// byte for byte.
struct Session {
    engine::KnowledgeBase kb;
    std::vector<std::string> history;
};

std::string save(const Session& s);
Session load(const std::string& text);

/// File variants take an advisory lock on the session file (shared for
/// reading, exclusive for writing). Single writer per file.
Session load_file(const std::string& path);
void save_file(const Session& s, const std::string& path);

}  // namespace bft::session
