#ifndef GRIDNAV_STREAMSYNC_HPP
#define GRIDNAV_STREAMSYNC_HPP

#include <cstdint>
#include <optional>
#include <vector>

namespace gridnav {

enum class MessageKind { image, metadata };

struct TimedMessage {
  double stamp = 0.0;      // seconds, source clock
  double size_mbit = 0.0;  // megabits
  MessageKind kind = MessageKind::image;
  uint64_t payload_id = 0;
};

enum class QueuePolicy { keep_latest, keep_all };

struct ChannelSpec {
  double bandwidth_mbps = 1.0;  // megabits per second
  QueuePolicy queue_policy = QueuePolicy::keep_latest;
  size_t queue_capacity = 1;
};

struct Delivered {
  TimedMessage message;
  double arrival = 0.0;  // seconds
};

/// A (metadata, image) pair; both halves are restamped with the image's
/// source stamp.
struct SyncedPair {
  TimedMessage metadata;
  TimedMessage image;
  double emit_time = 0.0;  // arrival time of the triggering event
};

/// Periodic stream helper: messages at stamp k / rate_hz for k = 0, 1, ...
/// strictly below the horizon.
std::vector<TimedMessage> make_periodic_stream(double rate_hz, double size_mbit, MessageKind kind,
                                               double horizon);

/// Serializes a timestamp-ordered stream through a bandwidth-limited link.
/// Each message occupies the link for size / bandwidth seconds; messages
/// arriving while it is busy wait in the queue per policy (keep-latest drops
/// all but the newest). Only deliveries completing by the horizon are
/// returned.
std::vector<Delivered> transmit(const std::vector<TimedMessage>& stream, const ChannelSpec& channel,
                                double horizon);

/// Online synchronizer: emits one pair per image, paired with the most
/// recently arrived metadata. Images arriving before any metadata wait until
/// the first metadata shows up.
class Synchronizer {
 public:
  /// Usually returns nothing; the first metadata flushes any images that
  /// were waiting for it.
  std::vector<SyncedPair> push_metadata(const Delivered& metadata);
  std::vector<SyncedPair> push_image(const Delivered& image);

 private:
  std::optional<Delivered> latest_metadata_;
  std::vector<Delivered> pending_images_;
};

/// Batch form of the synchronizer over two delivered sequences (both ordered
/// by arrival time).
std::vector<SyncedPair> synchronize(const std::vector<Delivered>& metadata,
                                    const std::vector<Delivered>& images);

/// Delivered metadata count over delivered image count; nullopt when no
/// images were delivered.
std::optional<double> desync_ratio(const std::vector<Delivered>& metadata,
                                   const std::vector<Delivered>& images);

}  // namespace gridnav

#endif
