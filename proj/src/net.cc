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

#include "nebula/net.h"

#include <arpa/inet.h>
#include <errno.h>
#include <fcntl.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <signal.h>
#include <spawn.h>
#include <sys/socket.h>
#include <sys/stat.h>
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cstring>
#include <fstream>
#include <sstream>

#include "absl/strings/ascii.h"
#include "absl/strings/escaping.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "nebula/status_macros.h"
#include "nebula/strings.h"

extern char** environ;

namespace nebula {

namespace {

constexpr size_t kReadChunk = 64 * 1024;
constexpr size_t kLogBufferSize = 1 << 20;

absl::Status ErrnoStatus(std::string_view what) {
  int err = errno;
  return absl::UnavailableError(
      absl::StrCat(ToAbsl(what), ": ", std::strerror(err)));
}

void SetNoDelay(int fd) {
  int one = 1;
  setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
}

absl::StatusOr<sockaddr_in> ToSockaddr(const HostPort& address) {
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(address.port);
  std::string host = address.host == "localhost" ? "127.0.0.1" : address.host;
  if (inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("not an IPv4 address: ", host));
  }
  return addr;
}

Frame AckFrame(uint32_t count) {
  return Frame{MessageType::kAck, EncodeAck(count)};
}

}  // namespace

void FileDescriptor::Reset() {
  if (fd_ >= 0) ::close(fd_);
  fd_ = -1;
}

std::string HostPort::ToString() const { return absl::StrCat(host, ":", port); }

absl::StatusOr<HostPort> ParseHostPort(std::string_view text) {
  size_t colon = text.rfind(':');
  if (colon == std::string_view::npos) {
    return absl::InvalidArgumentError(
        absl::StrCat("expected host:port, got '", ToAbsl(text), "'"));
  }
  HostPort out;
  if (colon > 0) out.host = std::string(text.substr(0, colon));
  uint32_t port = 0;
  if (!absl::SimpleAtoi(ToAbsl(text.substr(colon + 1)), &port) ||
      port > 65535) {
    return absl::InvalidArgumentError(
        absl::StrCat("bad port in '", ToAbsl(text), "'"));
  }
  out.port = static_cast<uint16_t>(port);
  NEBULA_RETURN_IF_ERROR(ToSockaddr(out).status());
  return out;
}

absl::StatusOr<FileDescriptor> ListenTcp(const HostPort& address,
                                         int backlog) {
  NEBULA_ASSIGN_OR_RETURN(sockaddr_in addr, ToSockaddr(address));
  FileDescriptor fd(::socket(AF_INET, SOCK_STREAM | SOCK_CLOEXEC, 0));
  if (!fd.valid()) return ErrnoStatus("socket");
  int one = 1;
  setsockopt(fd.get(), SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
  if (::bind(fd.get(), reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0) {
    return ErrnoStatus(absl::StrCat("bind ", address.ToString()));
  }
  if (::listen(fd.get(), backlog) != 0) return ErrnoStatus("listen");
  return fd;
}

absl::StatusOr<uint16_t> LocalPort(int fd) {
  sockaddr_in addr{};
  socklen_t len = sizeof(addr);
  if (getsockname(fd, reinterpret_cast<sockaddr*>(&addr), &len) != 0) {
    return ErrnoStatus("getsockname");
  }
  return ntohs(addr.sin_port);
}

absl::StatusOr<FileDescriptor> ConnectTcp(const HostPort& address) {
  NEBULA_ASSIGN_OR_RETURN(sockaddr_in addr, ToSockaddr(address));
  FileDescriptor fd(::socket(AF_INET, SOCK_STREAM | SOCK_CLOEXEC, 0));
  if (!fd.valid()) return ErrnoStatus("socket");
  int rc;
  do {
    rc = ::connect(fd.get(), reinterpret_cast<sockaddr*>(&addr), sizeof(addr));
  } while (rc != 0 && errno == EINTR);
  if (rc != 0) return ErrnoStatus(absl::StrCat("connect ", address.ToString()));
  SetNoDelay(fd.get());
  return fd;
}

FrameStream::FrameStream(FileDescriptor fd, size_t max_payload)
    : fd_(std::move(fd)), max_payload_(max_payload) {}

absl::Status FrameStream::Fill(size_t needed) {
  while (read_buffer_.size() - read_pos_ < needed) {
    if (read_pos_ > 0 && read_pos_ * 2 >= read_buffer_.size()) {
      read_buffer_.erase(0, read_pos_);
      read_pos_ = 0;
    }
    size_t old = read_buffer_.size();
    read_buffer_.resize(old + kReadChunk);
    ssize_t n = ::recv(fd_.get(), read_buffer_.data() + old, kReadChunk, 0);
    read_buffer_.resize(old + (n > 0 ? n : 0));
    if (n == 0) return absl::OutOfRangeError("end of stream");
    if (n < 0) {
      if (errno == EINTR) continue;
      return ErrnoStatus("recv");
    }
  }
  return absl::OkStatus();
}

bool FrameStream::HasBufferedFrame() const {
  size_t available = read_buffer_.size() - read_pos_;
  if (available < kFrameHeaderSize) return false;
  FrameHeader h = ParseFrameHeader(read_buffer_.data() + read_pos_);
  // An invalid header is "ready" too: Read() reports it without blocking.
  if (!ValidateFrameHeader(h, max_payload_).ok()) return true;
  return available >= kFrameHeaderSize + h.length;
}

absl::StatusOr<Frame> FrameStream::Read() {
  if (broken_) return absl::FailedPreconditionError("stream is broken");
  absl::Status filled = Fill(kFrameHeaderSize);
  if (!filled.ok()) {
    bool clean = absl::IsOutOfRange(filled) && read_pos_ == read_buffer_.size();
    broken_ = true;
    if (clean) return filled;
    return absl::IsOutOfRange(filled)
               ? absl::DataLossError("stream ended inside a frame header")
               : filled;
  }
  FrameHeader h = ParseFrameHeader(read_buffer_.data() + read_pos_);
  absl::Status valid = ValidateFrameHeader(h, max_payload_);
  bool skippable = h.version == kWireVersion && h.length <= max_payload_;
  if (!valid.ok() && !skippable) {
    broken_ = true;
    return valid;
  }
  filled = Fill(kFrameHeaderSize + h.length);
  if (!filled.ok()) {
    broken_ = true;
    return absl::IsOutOfRange(filled)
               ? absl::DataLossError("stream ended inside a frame payload")
               : filled;
  }
  Frame frame{static_cast<MessageType>(h.type),
              read_buffer_.substr(read_pos_ + kFrameHeaderSize, h.length)};
  read_pos_ += kFrameHeaderSize + h.length;
  if (!valid.ok()) return valid;
  return frame;
}

void FrameStream::Queue(const Frame& frame) { frame.AppendTo(write_buffer_); }

absl::Status FrameStream::Flush() {
  size_t off = 0;
  while (off < write_buffer_.size()) {
    ssize_t n = ::send(fd_.get(), write_buffer_.data() + off,
                       write_buffer_.size() - off, MSG_NOSIGNAL);
    if (n < 0) {
      if (errno == EINTR) continue;
      write_buffer_.clear();
      return ErrnoStatus("send");
    }
    off += static_cast<size_t>(n);
  }
  write_buffer_.clear();
  return absl::OkStatus();
}

absl::Status FrameStream::Write(const Frame& frame) {
  Queue(frame);
  return Flush();
}

void FrameStream::Shutdown() { ::shutdown(fd_.get(), SHUT_RDWR); }

FrameServer::~FrameServer() { Stop(); }

absl::Status FrameServer::Start(const HostPort& address) {
  if (listener_.valid()) return absl::FailedPreconditionError("already started");
  NEBULA_ASSIGN_OR_RETURN(listener_, ListenTcp(address));
  NEBULA_ASSIGN_OR_RETURN(port_, LocalPort(listener_.get()));
  stopping_ = false;
  accept_thread_ = std::thread(&FrameServer::AcceptLoop, this);
  return absl::OkStatus();
}

void FrameServer::AcceptLoop() {
  while (!stopping_) {
    // No address buffer: the server never learns who connected.
    int fd = ::accept4(listener_.get(), nullptr, nullptr, SOCK_CLOEXEC);
    if (fd < 0) {
      if (stopping_) break;
      if (errno == EINTR || errno == ECONNABORTED) continue;
      if (errno == EMFILE || errno == ENFILE) {
        std::this_thread::sleep_for(std::chrono::milliseconds(10));
        continue;
      }
      break;
    }
    SetNoDelay(fd);
    std::lock_guard<std::mutex> lock(connections_mu_);
    if (stopping_) {
      ::close(fd);
      break;
    }
    ReapFinished();
    Connection& c = connections_.emplace_back();
    c.stream = std::make_unique<FrameStream>(FileDescriptor(fd));
    c.thread = std::thread(&FrameServer::Serve, this, &c);
  }
}

void FrameServer::ReapFinished() {
  for (auto it = connections_.begin(); it != connections_.end();) {
    if (it->done) {
      it->thread.join();
      it = connections_.erase(it);
    } else {
      ++it;
    }
  }
}

void FrameServer::Serve(Connection* connection) {
  FrameStream& stream = *connection->stream;
  bool open = true;
  while (open) {
    do {
      absl::StatusOr<Frame> request = stream.Read();
      if (request.ok()) {
        stream.Queue(Handle(*request));
      } else if (absl::IsOutOfRange(request.status())) {
        open = false;
      } else {
        stream.Queue(ErrorFrame(request.status()));
        if (stream.broken()) open = false;
      }
    } while (open && stream.HasBufferedFrame());
    absl::Status committed = EndBatch();
    if (!committed.ok()) {
      // Acks in the buffer claim durability that was not achieved.
      break;
    }
    if (!stream.Flush().ok()) break;
  }
  // The peer sees end of stream now; the descriptor is closed on reap.
  stream.Shutdown();
  connection->done = true;
}

void FrameServer::Stop() {
  stopping_ = true;
  if (listener_.valid()) ::shutdown(listener_.get(), SHUT_RDWR);
  if (accept_thread_.joinable()) accept_thread_.join();
  std::lock_guard<std::mutex> lock(connections_mu_);
  for (Connection& c : connections_) c.stream->Shutdown();
  for (Connection& c : connections_) {
    if (c.thread.joinable()) c.thread.join();
  }
  connections_.clear();
  listener_.Reset();
}

Frame RandomnessServer::Handle(const Frame& request) {
  switch (request.type) {
    case MessageType::kPublicKeyRequest:
      return Frame{MessageType::kPublicKeyResponse,
                   keypair_.public_key.Encode()};
    case MessageType::kOprfRequest: {
      absl::StatusOr<std::vector<GroupElement>> blinded =
          DecodeOprfRequest(request.payload);
      if (!blinded.ok()) return ErrorFrame(blinded.status());
      absl::StatusOr<Evaluation> ev = nebula::Evaluate(*blinded, keypair_);
      if (!ev.ok()) return ErrorFrame(ev.status());
      return Frame{MessageType::kOprfResponse, EncodeOprfResponse(*ev)};
    }
    default:
      return ErrorFrame(absl::InvalidArgumentError(
          absl::StrCat("randomness server does not accept message type ",
                       static_cast<int>(request.type))));
  }
}

absl::StatusOr<LogReplay> ReadSubmissionLog(const std::string& path) {
  LogReplay replay;
  std::ifstream in(path, std::ios::binary);
  if (!in) return replay;
  std::stringstream buffer;
  buffer << in.rdbuf();
  std::string data = buffer.str();
  size_t pos = 0;
  while (data.size() - pos >= kFrameHeaderSize) {
    FrameHeader h = ParseFrameHeader(data.data() + pos);
    absl::Status valid = ValidateFrameHeader(h);
    if (!valid.ok()) {
      return absl::DataLossError(absl::StrCat(
          "corrupt submission log at offset ", pos, ": ", valid.message()));
    }
    if (data.size() - pos - kFrameHeaderSize < h.length) break;
    auto type = static_cast<MessageType>(h.type);
    if (type != MessageType::kSubmit && type != MessageType::kSubmitLayered &&
        type != MessageType::kSeal) {
      return absl::DataLossError(absl::StrCat(
          "unexpected record type ", h.type, " at offset ", pos));
    }
    if (replay.sealed) {
      return absl::DataLossError("records after the seal marker");
    }
    if (type == MessageType::kSeal) {
      replay.sealed = true;
    } else {
      replay.records.push_back(
          Frame{type, data.substr(pos + kFrameHeaderSize, h.length)});
    }
    pos += kFrameHeaderSize + h.length;
  }
  replay.valid_bytes = pos;
  return replay;
}

AggregationServer::AggregationServer(AggregationServerOptions options)
    : options_(std::move(options)),
      single_(options_.params),
      layered_(options_.params) {}

AggregationServer::~AggregationServer() {
  Stop();
  if (log_ != nullptr) std::fclose(log_);
}

absl::StatusOr<std::unique_ptr<AggregationServer>> AggregationServer::Create(
    AggregationServerOptions options) {
  std::unique_ptr<AggregationServer> server(
      new AggregationServer(std::move(options)));
  const std::string& path = server->options_.log_path;
  if (path.empty()) return server;

  NEBULA_ASSIGN_OR_RETURN(LogReplay replay, ReadSubmissionLog(path));
  if (::truncate(path.c_str(), static_cast<off_t>(replay.valid_bytes)) != 0 &&
      errno != ENOENT) {
    return ErrnoStatus("truncate log");
  }
  server->log_ = std::fopen(path.c_str(), "ab");
  if (server->log_ == nullptr) return ErrnoStatus(absl::StrCat("open ", path));
  std::setvbuf(server->log_, nullptr, _IOFBF, kLogBufferSize);

  // Replay without re-logging.
  std::FILE* log = std::exchange(server->log_, nullptr);
  for (const Frame& record : replay.records) {
    absl::Status s = server->Ingest(record);
    if (!s.ok()) {
      std::fclose(log);
      return absl::DataLossError(
          absl::StrCat("bad record in submission log: ", s.message()));
    }
  }
  server->log_ = log;
  if (replay.sealed) {
    server->sealed_on_disk_ = true;
    NEBULA_RETURN_IF_ERROR(server->SealAndDecode().status());
  }
  return server;
}

absl::Status AggregationServer::AppendToLog(const Frame& frame) {
  if (log_ == nullptr) return absl::OkStatus();
  std::string bytes = frame.Encode();
  if (std::fwrite(bytes.data(), 1, bytes.size(), log_) != bytes.size()) {
    return ErrnoStatus("write log");
  }
  log_dirty_ = true;
  return absl::OkStatus();
}

absl::Status AggregationServer::Ingest(const Frame& frame) {
  Mode mode;
  std::optional<Submission> single;
  std::optional<SuperSubmission> layered;
  if (frame.type == MessageType::kSubmit) {
    NEBULA_ASSIGN_OR_RETURN(single, Submission::Parse(frame.payload));
    mode = Mode::kSingle;
  } else if (frame.type == MessageType::kSubmitLayered) {
    NEBULA_ASSIGN_OR_RETURN(layered, SuperSubmission::Parse(frame.payload));
    mode = Mode::kLayered;
  } else {
    return absl::InvalidArgumentError("not a submission frame");
  }

  std::lock_guard<std::mutex> lock(mu_);
  if (sealed_) return absl::FailedPreconditionError("aggregation is sealed");
  if (mode_ != Mode::kUnset && mode_ != mode) {
    return absl::InvalidArgumentError(
        "single-attribute and layered submissions cannot be mixed");
  }
  NEBULA_RETURN_IF_ERROR(AppendToLog(frame));
  mode_ = mode;
  ++accepted_;
  if (single) return single_.Add(*std::move(single));
  return layered_.Add(*std::move(layered));
}

absl::Status AggregationServer::EndBatch() {
  std::lock_guard<std::mutex> lock(mu_);
  if (log_ != nullptr && log_dirty_) {
    if (std::fflush(log_) != 0) return ErrnoStatus("flush log");
    log_dirty_ = false;
  }
  return absl::OkStatus();
}

absl::StatusOr<std::string> AggregationServer::SealAndDecode() {
  std::lock_guard<std::mutex> lock(mu_);
  if (report_csv_) return *report_csv_;
  sealed_ = true;
  if (log_ != nullptr) {
    if (!sealed_on_disk_) {
      NEBULA_RETURN_IF_ERROR(AppendToLog(Frame{MessageType::kSeal, ""}));
      sealed_on_disk_ = true;
    }
    if (std::fflush(log_) != 0) return ErrnoStatus("flush log");
    ::fsync(fileno(log_));
    log_dirty_ = false;
  }

  std::string csv;
  if (mode_ == Mode::kLayered) {
    layered_.Seal();
    NEBULA_ASSIGN_OR_RETURN(std::vector<HistogramReport> reports,
                            layered_.Decode());
    csv = ReportsToCsv(reports);
  } else {
    single_.Seal();
    NEBULA_ASSIGN_OR_RETURN(HistogramReport report, single_.Decode());
    csv = ReportToCsv(report);
  }
  if (!options_.report_path.empty()) {
    std::string tmp = options_.report_path + ".tmp";
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      out << csv;
      if (!out) return absl::UnavailableError(absl::StrCat("write ", tmp));
    }
    if (std::rename(tmp.c_str(), options_.report_path.c_str()) != 0) {
      return ErrnoStatus("rename report");
    }
  }
  report_csv_ = csv;
  return csv;
}

size_t AggregationServer::accepted() const {
  std::lock_guard<std::mutex> lock(mu_);
  return accepted_;
}

bool AggregationServer::sealed() const {
  std::lock_guard<std::mutex> lock(mu_);
  return sealed_;
}

Frame AggregationServer::Handle(const Frame& request) {
  switch (request.type) {
    case MessageType::kSubmit:
    case MessageType::kSubmitLayered: {
      absl::Status s = Ingest(request);
      return s.ok() ? AckFrame(1) : ErrorFrame(s);
    }
    case MessageType::kSeal: {
      absl::StatusOr<std::string> csv = SealAndDecode();
      if (!csv.ok()) return ErrorFrame(csv.status());
      return AckFrame(static_cast<uint32_t>(accepted()));
    }
    default:
      return ErrorFrame(absl::InvalidArgumentError(
          absl::StrCat("aggregation server does not accept message type ",
                       static_cast<int>(request.type))));
  }
}

absl::StatusOr<std::unique_ptr<RemoteRandomnessService>>
RemoteRandomnessService::Connect(const HostPort& address) {
  NEBULA_ASSIGN_OR_RETURN(FileDescriptor fd, ConnectTcp(address));
  return std::unique_ptr<RemoteRandomnessService>(
      new RemoteRandomnessService(std::move(fd)));
}

absl::StatusOr<Frame> RemoteRandomnessService::RoundTrip(const Frame& request) {
  NEBULA_RETURN_IF_ERROR(stream_.Write(request));
  NEBULA_ASSIGN_OR_RETURN(Frame response, stream_.Read());
  if (response.type == MessageType::kError) {
    return DecodeError(response.payload);
  }
  return response;
}

absl::StatusOr<Evaluation> RemoteRandomnessService::Evaluate(
    absl::Span<const GroupElement> blinded) {
  if (blinded.empty() || blinded.size() > kMaxOprfBatchSize) {
    return absl::InvalidArgumentError("OPRF batch size out of range");
  }
  std::lock_guard<std::mutex> lock(mu_);
  NEBULA_ASSIGN_OR_RETURN(
      Frame response,
      RoundTrip(Frame{MessageType::kOprfRequest, EncodeOprfRequest(blinded)}));
  if (response.type != MessageType::kOprfResponse) {
    return absl::InternalError("unexpected response to an OPRF request");
  }
  NEBULA_ASSIGN_OR_RETURN(Evaluation ev, DecodeOprfResponse(response.payload));
  if (ev.elements.size() != blinded.size()) {
    return absl::InternalError("OPRF response has the wrong batch size");
  }
  return ev;
}

absl::StatusOr<GroupElement> RemoteRandomnessService::PublicKey() {
  std::lock_guard<std::mutex> lock(mu_);
  if (public_key_) return *public_key_;
  NEBULA_ASSIGN_OR_RETURN(
      Frame response, RoundTrip(Frame{MessageType::kPublicKeyRequest, ""}));
  if (response.type != MessageType::kPublicKeyResponse) {
    return absl::InternalError("unexpected response to a key request");
  }
  NEBULA_ASSIGN_OR_RETURN(GroupElement key,
                          GroupElement::Decode(response.payload));
  public_key_ = key;
  return key;
}

absl::StatusOr<std::unique_ptr<AggregationClient>> AggregationClient::Connect(
    const HostPort& address) {
  NEBULA_ASSIGN_OR_RETURN(FileDescriptor fd, ConnectTcp(address));
  return std::unique_ptr<AggregationClient>(
      new AggregationClient(std::move(fd)));
}

absl::Status AggregationClient::ReadAck() {
  NEBULA_ASSIGN_OR_RETURN(Frame response, stream_.Read());
  if (response.type == MessageType::kError) {
    return DecodeError(response.payload);
  }
  if (response.type != MessageType::kAck) {
    return absl::InternalError("expected an ack");
  }
  return DecodeAck(response.payload).status();
}

absl::Status AggregationClient::Submit(const Submission& submission) {
  NEBULA_RETURN_IF_ERROR(
      stream_.Write(Frame{MessageType::kSubmit, submission.Serialize()}));
  return ReadAck();
}

absl::Status AggregationClient::SubmitLayered(
    const SuperSubmission& submission) {
  NEBULA_RETURN_IF_ERROR(stream_.Write(
      Frame{MessageType::kSubmitLayered, submission.Serialize()}));
  return ReadAck();
}

absl::Status AggregationClient::SubmitStream(
    size_t count, const std::function<Frame(size_t)>& next, size_t window) {
  if (window == 0) window = 1;
  absl::Status first_error;
  size_t sent = 0;
  size_t acked = 0;
  while (acked < count) {
    while (sent < count && sent - acked < window) {
      stream_.Queue(next(sent++));
      if (stream_.queued_bytes() >= kReadChunk) {
        NEBULA_RETURN_IF_ERROR(stream_.Flush());
      }
    }
    NEBULA_RETURN_IF_ERROR(stream_.Flush());
    do {
      absl::Status s = ReadAck();
      if (!s.ok() && stream_.broken()) return s;
      if (!s.ok() && first_error.ok()) first_error = s;
      ++acked;
    } while (acked < count && stream_.HasBufferedFrame());
  }
  return first_error;
}

absl::StatusOr<uint32_t> AggregationClient::Seal() {
  NEBULA_RETURN_IF_ERROR(stream_.Write(Frame{MessageType::kSeal, ""}));
  NEBULA_ASSIGN_OR_RETURN(Frame response, stream_.Read());
  if (response.type == MessageType::kError) {
    return DecodeError(response.payload);
  }
  if (response.type != MessageType::kAck) {
    return absl::InternalError("expected an ack");
  }
  return DecodeAck(response.payload);
}

absl::StatusOr<ChildProcess> ChildProcess::Spawn(
    const std::vector<std::string>& argv,
    const std::vector<std::pair<std::string, std::string>>& extra_env) {
  if (argv.empty()) return absl::InvalidArgumentError("empty argv");
  std::vector<std::string> env_storage;
  for (char** e = environ; *e != nullptr; ++e) {
    std::string_view entry(*e);
    bool overridden = false;
    for (const auto& [key, value] : extra_env) {
      if (entry.size() > key.size() && entry.substr(0, key.size()) == key &&
          entry[key.size()] == '=') {
        overridden = true;
      }
    }
    if (!overridden) env_storage.emplace_back(entry);
  }
  for (const auto& [key, value] : extra_env) {
    env_storage.push_back(key + "=" + value);
  }
  std::vector<char*> env_ptrs;
  for (std::string& e : env_storage) env_ptrs.push_back(e.data());
  env_ptrs.push_back(nullptr);
  std::vector<std::string> argv_storage = argv;
  std::vector<char*> argv_ptrs;
  for (std::string& a : argv_storage) argv_ptrs.push_back(a.data());
  argv_ptrs.push_back(nullptr);

  pid_t pid = -1;
  int rc = posix_spawnp(&pid, argv_ptrs[0], nullptr, nullptr, argv_ptrs.data(),
                        env_ptrs.data());
  if (rc != 0) {
    return absl::UnavailableError(
        absl::StrCat("spawn ", argv[0], ": ", std::strerror(rc)));
  }
  return ChildProcess(pid);
}

ChildProcess& ChildProcess::operator=(ChildProcess&& other) noexcept {
  if (this != &other) {
    if (running()) {
      ::kill(pid_, SIGKILL);
      ::waitpid(pid_, nullptr, 0);
    }
    pid_ = std::exchange(other.pid_, -1);
  }
  return *this;
}

ChildProcess::~ChildProcess() {
  if (running()) {
    ::kill(pid_, SIGKILL);
    ::waitpid(pid_, nullptr, 0);
  }
}

absl::StatusOr<int> ChildProcess::Wait() {
  if (!running()) return absl::FailedPreconditionError("no child process");
  int status = 0;
  pid_t rc;
  do {
    rc = ::waitpid(pid_, &status, 0);
  } while (rc < 0 && errno == EINTR);
  if (rc < 0) return ErrnoStatus("waitpid");
  pid_ = -1;
  if (WIFEXITED(status)) return WEXITSTATUS(status);
  return 128 + WTERMSIG(status);
}

absl::StatusOr<int> ChildProcess::Terminate() {
  if (!running()) return absl::FailedPreconditionError("no child process");
  ::kill(pid_, SIGTERM);
  return Wait();
}

absl::Status WritePortFile(const std::string& path, uint16_t port) {
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    out << port << "\n";
    if (!out) return absl::UnavailableError(absl::StrCat("write ", tmp));
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    return ErrnoStatus("rename port file");
  }
  return absl::OkStatus();
}

absl::StatusOr<uint16_t> WaitForPortFile(const std::string& path,
                                         double timeout_seconds) {
  auto deadline = std::chrono::steady_clock::now() +
                  std::chrono::duration<double>(timeout_seconds);
  while (std::chrono::steady_clock::now() < deadline) {
    std::ifstream in(path);
    uint32_t port = 0;
    if (in >> port && port > 0 && port <= 65535) {
      return static_cast<uint16_t>(port);
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(10));
  }
  return absl::DeadlineExceededError(
      absl::StrCat("no port written to ", path));
}

absl::StatusOr<Bytes32> ReadKeySeedFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  std::stringstream buffer;
  buffer << in.rdbuf();
  std::string data = buffer.str();
  if (data.size() == 32) return ToBytes32(data);
  std::string_view hex = ToStd(absl::StripAsciiWhitespace(data));
  if (hex.size() == 64) {
    bool all_hex = true;
    for (char c : hex) all_hex = all_hex && absl::ascii_isxdigit(c);
    if (all_hex) return ToBytes32(absl::HexStringToBytes(ToAbsl(hex)));
  }
  return absl::InvalidArgumentError(
      absl::StrCat(path, ": expected 32 raw bytes or 64 hex characters"));
}

absl::Status WriteKeySeedFile(const std::string& path, const Bytes32& seed) {
  int fd = ::open(path.c_str(), O_WRONLY | O_CREAT | O_TRUNC | O_CLOEXEC, 0600);
  if (fd < 0) return ErrnoStatus(absl::StrCat("open ", path));
  std::string hex = absl::BytesToHexString(ToAbsl(AsStringView(seed))) + "\n";
  ssize_t n = ::write(fd, hex.data(), hex.size());
  ::close(fd);
  if (n != static_cast<ssize_t>(hex.size())) return ErrnoStatus("write seed");
  return absl::OkStatus();
}

}  // namespace nebula
