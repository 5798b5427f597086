#pragma once

#include <memory>
#include <string>

#include "counselforge/review/review_store.hpp"

namespace counselforge::review {

/// JSON API over a ReviewStore:
///   GET  /api/queue?status=pending
///   GET  /api/items/{id}
///   POST /api/items/{id}/decision   (409 revision conflict or settled item,
///                                    404 unknown item, 422 invalid edit,
///                                    400 malformed body)
///   GET  /api/export                 (JSON Lines)
///   GET  /api/stats
/// Responses carry permissive CORS headers so a browser UI on another port
/// can call it.
class ReviewServer {
 public:
  explicit ReviewServer(ReviewStore& store);
  ~ReviewServer();

  ReviewServer(const ReviewServer&) = delete;
  ReviewServer& operator=(const ReviewServer&) = delete;

  /// Binds; port 0 picks a free port. Returns the bound port. Throws IoError.
  int bind(const std::string& host, int port);
  /// Blocks serving requests until stop().
  void serve();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace counselforge::review
