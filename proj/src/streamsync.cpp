#include "gridnav/streamsync.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>

namespace gridnav {

std::vector<TimedMessage> make_periodic_stream(double rate_hz, double size_mbit, MessageKind kind,
                                               double horizon) {
  if (rate_hz <= 0.0 || size_mbit <= 0.0 || horizon <= 0.0)
    throw std::invalid_argument("make_periodic_stream: arguments must be positive");
  std::vector<TimedMessage> stream;
  const double period = 1.0 / rate_hz;
  for (uint64_t k = 0;; ++k) {
    const double stamp = k * period;
    if (stamp >= horizon) break;
    stream.push_back({stamp, size_mbit, kind, k});
  }
  return stream;
}

std::vector<Delivered> transmit(const std::vector<TimedMessage>& stream, const ChannelSpec& channel,
                                double horizon) {
  if (channel.bandwidth_mbps <= 0.0) throw std::invalid_argument("transmit: bandwidth must be positive");
  if (channel.queue_capacity < 1) throw std::invalid_argument("transmit: queue capacity must be >= 1");
  for (size_t i = 0; i < stream.size(); ++i) {
    if (stream[i].size_mbit <= 0.0) throw std::invalid_argument("transmit: message size must be positive");
    if (i > 0 && stream[i].stamp <= stream[i - 1].stamp)
      throw std::invalid_argument("transmit: stream stamps must strictly increase");
  }

  std::vector<Delivered> delivered;
  std::deque<TimedMessage> queue;
  double link_free_at = 0.0;

  const auto serve = [&](const TimedMessage& msg, double start) {
    link_free_at = start + msg.size_mbit / channel.bandwidth_mbps;
    if (link_free_at <= horizon) delivered.push_back({msg, link_free_at});
  };

  for (const TimedMessage& msg : stream) {
    // Drain queued messages whose service can start before this arrival.
    while (!queue.empty() && link_free_at <= msg.stamp) {
      const TimedMessage next = queue.front();
      queue.pop_front();
      serve(next, link_free_at);
    }
    if (queue.empty() && link_free_at <= msg.stamp) {
      serve(msg, msg.stamp);
    } else if (channel.queue_policy == QueuePolicy::keep_latest) {
      queue.clear();
      queue.push_back(msg);
    } else if (queue.size() < channel.queue_capacity) {
      queue.push_back(msg);
    }
    // keep-all with a full queue drops the arrival.
  }
  while (!queue.empty() && link_free_at <= horizon) {
    const TimedMessage next = queue.front();
    queue.pop_front();
    serve(next, link_free_at);
  }
  return delivered;
}

namespace {

SyncedPair make_pair_restamped(const Delivered& metadata, const Delivered& image) {
  SyncedPair pair;
  pair.metadata = metadata.message;
  pair.image = image.message;
  // Republishing restamps both halves with the image's stamp so a
  // downstream consumer sees a single consistent clock.
  pair.metadata.stamp = image.message.stamp;
  pair.image.stamp = image.message.stamp;
  pair.emit_time = std::max(image.arrival, metadata.arrival);
  return pair;
}

}  // namespace

std::vector<SyncedPair> Synchronizer::push_metadata(const Delivered& metadata) {
  const bool first = !latest_metadata_.has_value();
  latest_metadata_ = metadata;
  std::vector<SyncedPair> out;
  if (first) {
    for (const Delivered& img : pending_images_) out.push_back(make_pair_restamped(metadata, img));
    pending_images_.clear();
  }
  return out;
}

std::vector<SyncedPair> Synchronizer::push_image(const Delivered& image) {
  if (!latest_metadata_) {
    pending_images_.push_back(image);
    return {};
  }
  return {make_pair_restamped(*latest_metadata_, image)};
}

std::vector<SyncedPair> synchronize(const std::vector<Delivered>& metadata,
                                    const std::vector<Delivered>& images) {
  Synchronizer sync;
  std::vector<SyncedPair> pairs;
  size_t mi = 0, ii = 0;
  while (mi < metadata.size() || ii < images.size()) {
    const bool take_metadata =
        ii >= images.size() ||
        (mi < metadata.size() && metadata[mi].arrival <= images[ii].arrival);
    const auto emitted =
        take_metadata ? sync.push_metadata(metadata[mi++]) : sync.push_image(images[ii++]);
    pairs.insert(pairs.end(), emitted.begin(), emitted.end());
  }
  return pairs;
}

std::optional<double> desync_ratio(const std::vector<Delivered>& metadata,
                                   const std::vector<Delivered>& images) {
  if (images.empty()) return std::nullopt;
  return static_cast<double>(metadata.size()) / static_cast<double>(images.size());
}

}  // namespace gridnav
