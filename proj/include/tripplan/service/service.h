#pragma once

#include <atomic>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>

#include "tripplan/service/plan_doc.h"

namespace tripplan::service {

// Dataset registry, stored profiles and planning over one loaded network.
//
// Plans read an immutable snapshot of the overlay set. Uploads are
// serialized and publish a new set by swapping the snapshot pointer, so a
// plan sees either the old or the new version of a dataset, never a mix.
//
// With a data directory, datasets and profiles persist as
//   index.json, datasets/<name>.v<N>.csv, profiles/<id>.json
// and are reloaded on construction.
class service {
public:
  explicit service(network, std::optional<std::filesystem::path> data_dir =
                                std::nullopt);

  // radius: query parameter text, empty for the default.
  response upload_dataset(std::string_view name, std::string_view radius,
                          std::string_view csv);
  response list_datasets() const;

  static response questions();
  response submit_answers(std::string_view body);
  response get_profile(std::string_view id) const;

  response plan(std::string_view body) const;

  network const& net() const { return net_; }
  std::shared_ptr<overlay_set const> overlays() const;
  std::optional<pcf::coefficient_profile> profile(std::string_view id) const;

private:
  std::shared_ptr<dataset_version const> publish(std::string const& name,
                                                 double radius,
                                                 std::string_view csv,
                                                 std::uint32_t version,
                                                 std::string uploaded_at);
  void write_index() const;
  void load();

  network net_;
  std::optional<std::filesystem::path> data_dir_;

  mutable std::mutex overlays_mutex_;
  std::shared_ptr<overlay_set const> overlays_;
  std::mutex upload_mutex_;  // single writer

  mutable std::mutex profiles_mutex_;
  std::map<std::string, pcf::coefficient_profile, std::less<>> profiles_;
  std::uint64_t next_profile_{1U};

  mutable std::mutex index_mutex_;
  mutable std::atomic<std::uint64_t> next_request_{1U};
};

}  // namespace tripplan::service
