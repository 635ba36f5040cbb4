// Copyright 2026 The Nebula Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// TCP transport for the randomness and aggregation daemons.
//
// Both servers speak the framed protocol in wire.h over plain TCP with one
// thread per connection. Peer addresses are never read: accept() is called
// without an address buffer, and nothing about the connection reaches the
// aggregation log.

#ifndef NEBULA_NET_H_
#define NEBULA_NET_H_

#include <sys/types.h>

#include <atomic>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <list>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "nebula/aggregate.h"
#include "nebula/client_encode.h"
#include "nebula/dp_params.h"
#include "nebula/multidim.h"
#include "nebula/oprf.h"
#include "nebula/wire.h"

namespace nebula {

class FileDescriptor {
 public:
  FileDescriptor() = default;
  explicit FileDescriptor(int fd) : fd_(fd) {}
  ~FileDescriptor() { Reset(); }

  FileDescriptor(FileDescriptor&& other) noexcept : fd_(other.Release()) {}
  FileDescriptor& operator=(FileDescriptor&& other) noexcept {
    if (this != &other) {
      Reset();
      fd_ = other.Release();
    }
    return *this;
  }

  int get() const { return fd_; }
  bool valid() const { return fd_ >= 0; }
  int Release() { return std::exchange(fd_, -1); }
  void Reset();

 private:
  int fd_ = -1;
};

struct HostPort {
  std::string host = "127.0.0.1";
  uint16_t port = 0;

  std::string ToString() const;
};

// "host:port" or ":port"; IPv4 literals and "localhost" only.
absl::StatusOr<HostPort> ParseHostPort(std::string_view text);

absl::StatusOr<FileDescriptor> ListenTcp(const HostPort& address,
                                         int backlog = 128);
absl::StatusOr<uint16_t> LocalPort(int fd);
absl::StatusOr<FileDescriptor> ConnectTcp(const HostPort& address);

// Buffered frame reader/writer over a connected socket.
class FrameStream {
 public:
  explicit FrameStream(FileDescriptor fd,
                       size_t max_payload = kMaxFramePayload);

  // OutOfRange on a clean end of stream between frames. After a header
  // that cannot be skipped (wrong version, oversized) broken() is true and
  // the stream must be closed. Unknown message types with a sane length
  // are skipped and reported as InvalidArgument.
  absl::StatusOr<Frame> Read();
  // True if a complete frame is already buffered, so Read() will not block.
  bool HasBufferedFrame() const;
  bool broken() const { return broken_; }

  void Queue(const Frame& frame);
  size_t queued_bytes() const { return write_buffer_.size(); }
  absl::Status Flush();
  absl::Status Write(const Frame& frame);

  // Wakes any blocked Read() in another thread.
  void Shutdown();
  int fd() const { return fd_.get(); }

 private:
  absl::Status Fill(size_t needed);

  FileDescriptor fd_;
  size_t max_payload_;
  std::string read_buffer_;
  size_t read_pos_ = 0;
  std::string write_buffer_;
  bool broken_ = false;
};

// Accept loop plus one thread per connection. Each connection handles all
// frames it has buffered, calls EndBatch(), then flushes the responses, so
// work done in EndBatch() (e.g. flushing a log) precedes every ack.
class FrameServer {
 public:
  virtual ~FrameServer();

  absl::Status Start(const HostPort& address);
  // Valid after Start().
  uint16_t port() const { return port_; }
  // Closes the listener and all live connections and joins their threads.
  void Stop();

 protected:
  virtual Frame Handle(const Frame& request) = 0;
  virtual absl::Status EndBatch() { return absl::OkStatus(); }

 private:
  struct Connection {
    std::unique_ptr<FrameStream> stream;
    std::thread thread;
    std::atomic<bool> done{false};
  };

  void AcceptLoop();
  void Serve(Connection* connection);
  void ReapFinished();

  FileDescriptor listener_;
  uint16_t port_ = 0;
  std::atomic<bool> stopping_{false};
  std::thread accept_thread_;
  std::mutex connections_mu_;
  std::list<Connection> connections_;
};

class RandomnessServer : public FrameServer {
 public:
  explicit RandomnessServer(ServerKeypair keypair)
      : keypair_(std::move(keypair)) {}
  ~RandomnessServer() override { Stop(); }

  const GroupElement& public_key() const { return keypair_.public_key; }

 protected:
  Frame Handle(const Frame& request) override;

 private:
  ServerKeypair keypair_;
};

// Replays a submission log. Frames of type Submit, SubmitLayered and Seal
// are the only valid records. A torn record at the end (crash during a
// write) is dropped; `valid_bytes` is where the intact prefix ends.
struct LogReplay {
  std::vector<Frame> records;
  size_t valid_bytes = 0;
  bool sealed = false;
};
absl::StatusOr<LogReplay> ReadSubmissionLog(const std::string& path);

struct AggregationServerOptions {
  DpParams params;
  // Append-only record of every accepted submission frame. Empty disables
  // persistence.
  std::string log_path;
  // Written on seal. Empty disables.
  std::string report_path;
};

// Accepts either single-attribute or layered submissions; the first one
// fixes the mode for the lifetime of the log.
class AggregationServer : public FrameServer {
 public:
  // Replays an existing log (ingesting its submissions and honouring a
  // seal marker) before serving.
  static absl::StatusOr<std::unique_ptr<AggregationServer>> Create(
      AggregationServerOptions options);
  ~AggregationServer() override;

  // Idempotent. Appends the seal marker, decodes, writes the report file
  // and returns the report CSV.
  absl::StatusOr<std::string> SealAndDecode();

  absl::Status Ingest(const Frame& frame);
  size_t accepted() const;
  bool sealed() const;

 protected:
  Frame Handle(const Frame& request) override;
  absl::Status EndBatch() override;

 private:
  enum class Mode { kUnset, kSingle, kLayered };

  explicit AggregationServer(AggregationServerOptions options);
  absl::Status AppendToLog(const Frame& frame);

  AggregationServerOptions options_;
  Aggregator single_;
  MultidimAggregator layered_;

  mutable std::mutex mu_;
  Mode mode_ = Mode::kUnset;
  size_t accepted_ = 0;
  bool sealed_ = false;
  std::optional<std::string> report_csv_;
  std::FILE* log_ = nullptr;
  bool log_dirty_ = false;
  bool sealed_on_disk_ = false;
};

// Client side of the randomness daemon. Thread-safe; the public key is
// fetched once and cached.
class RemoteRandomnessService : public RandomnessService {
 public:
  static absl::StatusOr<std::unique_ptr<RemoteRandomnessService>> Connect(
      const HostPort& address);

  absl::StatusOr<Evaluation> Evaluate(
      absl::Span<const GroupElement> blinded) override;
  absl::StatusOr<GroupElement> PublicKey() override;

 private:
  explicit RemoteRandomnessService(FileDescriptor fd)
      : stream_(std::move(fd)) {}

  absl::StatusOr<Frame> RoundTrip(const Frame& request);

  std::mutex mu_;
  FrameStream stream_;
  std::optional<GroupElement> public_key_;
};

class AggregationClient {
 public:
  static absl::StatusOr<std::unique_ptr<AggregationClient>> Connect(
      const HostPort& address);

  absl::Status Submit(const Submission& submission);
  absl::Status SubmitLayered(const SuperSubmission& submission);

  // Sends `count` frames produced by `next`, keeping at most `window`
  // unacknowledged. Acks are small, so a window of a few thousand cannot
  // fill the peer's send buffer and deadlock the two sides.
  absl::Status SubmitStream(size_t count,
                            const std::function<Frame(size_t)>& next,
                            size_t window = 2048);

  // Returns the number of submissions the server decoded.
  absl::StatusOr<uint32_t> Seal();

 private:
  explicit AggregationClient(FileDescriptor fd) : stream_(std::move(fd)) {}

  absl::Status ReadAck();

  FrameStream stream_;
};

// A spawned helper process, killed on destruction if still running.
class ChildProcess {
 public:
  static absl::StatusOr<ChildProcess> Spawn(
      const std::vector<std::string>& argv,
      const std::vector<std::pair<std::string, std::string>>& extra_env = {});

  ChildProcess(ChildProcess&& other) noexcept
      : pid_(std::exchange(other.pid_, -1)) {}
  ChildProcess& operator=(ChildProcess&& other) noexcept;
  ~ChildProcess();

  // A handle that owns no process.
  static ChildProcess None() { return ChildProcess(-1); }

  pid_t pid() const { return pid_; }
  bool running() const { return pid_ > 0; }

  // SIGTERM, then waits. Returns the exit status.
  absl::StatusOr<int> Terminate();
  absl::StatusOr<int> Wait();

 private:
  explicit ChildProcess(pid_t pid) : pid_(pid) {}

  pid_t pid_ = -1;
};

// Polls until `path` holds a port number written by a daemon.
absl::StatusOr<uint16_t> WaitForPortFile(const std::string& path,
                                         double timeout_seconds = 10.0);
absl::Status WritePortFile(const std::string& path, uint16_t port);

// 32 raw bytes or 64 hex characters, surrounding whitespace ignored.
absl::StatusOr<Bytes32> ReadKeySeedFile(const std::string& path);
absl::Status WriteKeySeedFile(const std::string& path, const Bytes32& seed);

}  // namespace nebula

#endif  // NEBULA_NET_H_
