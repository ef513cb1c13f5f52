// Copyright (c) 2026 The skillstack Authors
// Use of this source code is governed by the Apache-2.0 license, see LICENSE
#include "skillstack/net/server.hpp"

#include <algorithm>
#include <atomic>
#include <condition_variable>
#include <deque>
#include <filesystem>
#include <map>
#include <mutex>
#include <numeric>
#include <thread>

#include "skillstack/net/socket.hpp"
#include "skillstack/wire/frame.hpp"
#include "skillstack/wire/messages.hpp"
#include "skillstack/wire/skill_codec.hpp"

namespace skillstack::server {

using wire::ErrorCode;
using wire::MessageType;

namespace {

constexpr std::size_t kStateQueueLimit = 256;
constexpr auto kPollInterval = std::chrono::milliseconds(50);

class Session : public std::enable_shared_from_this<Session> {
 public:
  Session(net::Socket sock, Server::Impl& server) : sock_(std::move(sock)), server_(server) {}

  void start();
  void send_control(std::vector<std::uint8_t> bytes);
  // Drops the oldest queued state frame when the peer falls behind.
  bool send_state(std::vector<std::uint8_t> bytes);
  // Lets the writer drain what is queued, then disconnects.
  void close();
  void join();
  bool finished() const { return reader_done_.load() && writer_done_.load(); }

  // Guarded by the server's dispatch mutex.
  std::map<std::uint16_t, std::uint32_t> subscriptions;

 private:
  void read_loop();
  void write_loop();
  void handle(const wire::Frame& f);
  void reply(const wire::Frame& req, wire::AckMsg ack);
  void error(const wire::Frame& req, ErrorCode code, std::string message, std::vector<std::string> violations = {});

  net::Socket sock_;
  Server::Impl& server_;
  std::thread reader_;
  std::thread writer_;
  std::atomic<bool> reader_done_{false};
  std::atomic<bool> writer_done_{false};

  std::mutex mutex_;
  std::condition_variable cv_;
  std::deque<std::vector<std::uint8_t>> control_;
  std::deque<std::vector<std::uint8_t>> states_;
  bool closing_ = false;
};

}  // namespace

struct Server::Impl {
  explicit Impl(ServerConfig cfg);

  void accept_loop();
  void dispatch_loop();
  void pump();
  void notify();
  void update_publish_divisor(std::uint16_t robot_id);
  void reap_finished();

  ServerConfig config;
  std::map<std::uint16_t, std::unique_ptr<core::RobotCore>> robots;
  net::Listener listener;

  std::thread acceptor;
  std::thread dispatcher;
  std::atomic<bool> stopping{false};
  bool started = false;
  bool stopped = false;
  std::mutex lifecycle_mutex;

  // Sessions, skill ownership and subscriptions.
  std::mutex dispatch_mutex;
  std::vector<std::shared_ptr<Session>> sessions;
  std::map<std::pair<std::uint16_t, std::uint32_t>, std::weak_ptr<Session>> owners;

  std::mutex wake_mutex;
  std::condition_variable wake_cv;
  bool wake = false;

  std::atomic<std::uint64_t> sessions_accepted{0};
  std::atomic<std::uint64_t> frames_received{0};
  std::atomic<std::uint64_t> frame_errors{0};
  std::atomic<std::uint64_t> state_frames_dropped{0};
};

Server::Impl::Impl(ServerConfig cfg) : config(std::move(cfg)), listener(config.address, config.port) {
  std::map<std::filesystem::path, std::shared_ptr<const ArmModel>> models;
  for (const RobotConfig& rc : config.robots) {
    auto& model = models[rc.arm_config];
    if (!model) model = std::make_shared<const ArmModel>(load_arm_model(rc.arm_config));
    if (auto err = safety::config_error(rc.safety)) {
      throw ConfigError("robot " + std::to_string(rc.id), "safety", *err);
    }
    core::LoopOptions opts;
    opts.robot_id = rc.id;
    opts.safety = rc.safety;
    auto core = std::make_unique<core::RobotCore>(model, opts, config.clock);
    core->loop().set_output_callback([this] { notify(); });
    robots.emplace(rc.id, std::move(core));
  }
}

void Server::Impl::notify() {
  {
    const std::lock_guard<std::mutex> lock(wake_mutex);
    wake = true;
  }
  wake_cv.notify_one();
}

void Server::Impl::accept_loop() {
  while (!stopping.load()) {
    net::Socket s = listener.accept(kPollInterval);
    if (!s.valid()) continue;
    auto session = std::make_shared<Session>(std::move(s), *this);
    {
      const std::lock_guard<std::mutex> lock(dispatch_mutex);
      if (stopping.load()) break;
      sessions.push_back(session);
    }
    sessions_accepted.fetch_add(1);
    session->start();
  }
}

void Server::Impl::update_publish_divisor(std::uint16_t robot_id) {
  std::uint32_t g = 0;
  for (const auto& s : sessions) {
    if (auto it = s->subscriptions.find(robot_id); it != s->subscriptions.end()) g = std::gcd(g, it->second);
  }
  robots.at(robot_id)->loop().set_publish_divisor(g);
}

void Server::Impl::reap_finished() {
  std::vector<std::shared_ptr<Session>> dead;
  {
    const std::lock_guard<std::mutex> lock(dispatch_mutex);
    auto it = std::partition(sessions.begin(), sessions.end(), [](const auto& s) { return !s->finished(); });
    dead.assign(it, sessions.end());
    sessions.erase(it, sessions.end());
    for (const auto& s : dead) {
      for (const auto& [robot_id, _] : s->subscriptions) update_publish_divisor(robot_id);
    }
  }
  for (const auto& s : dead) s->join();
}

void Server::Impl::pump() {
  for (auto& [robot_id, core] : robots) {
    std::vector<wire::SkillStatusMsg> statuses = core->loop().take_status();
    std::vector<wire::StateRecord> records;
    while (auto r = core->loop().take_published()) records.push_back(*r);
    if (statuses.empty() && records.empty()) continue;

    const std::lock_guard<std::mutex> lock(dispatch_mutex);
    for (const wire::SkillStatusMsg& st : statuses) {
      const auto key = std::make_pair(robot_id, st.skill_id);
      auto it = owners.find(key);
      if (it == owners.end()) continue;
      if (auto session = it->second.lock()) {
        session->send_control(wire::encode_frame(MessageType::SkillStatus, robot_id, wire::encode(st)));
      }
      if (wire::is_terminal(st.phase)) owners.erase(it);
    }
    for (const wire::StateRecord& rec : records) {
      const std::uint64_t tick = wire::ByteReader(rec).u64();
      std::vector<std::uint8_t> frame;
      for (const auto& s : sessions) {
        auto sub = s->subscriptions.find(robot_id);
        if (sub == s->subscriptions.end() || tick % sub->second != 0) continue;
        if (frame.empty()) frame = wire::encode_frame(MessageType::RobotStateMsg, robot_id, rec);
        if (!s->send_state(frame)) state_frames_dropped.fetch_add(1);
      }
    }
  }
}

void Server::Impl::dispatch_loop() {
  while (!stopping.load()) {
    {
      std::unique_lock<std::mutex> lock(wake_mutex);
      wake_cv.wait_for(lock, kPollInterval, [&] { return wake || stopping.load(); });
      wake = false;
    }
    pump();
    reap_finished();
  }
}

namespace {

void Session::start() {
  writer_ = std::thread([this] { write_loop(); });
  reader_ = std::thread([this] { read_loop(); });
}

void Session::send_control(std::vector<std::uint8_t> bytes) {
  {
    const std::lock_guard<std::mutex> lock(mutex_);
    if (closing_ && writer_done_.load()) return;
    control_.push_back(std::move(bytes));
  }
  cv_.notify_one();
}

bool Session::send_state(std::vector<std::uint8_t> bytes) {
  bool kept_all = true;
  {
    const std::lock_guard<std::mutex> lock(mutex_);
    if (writer_done_.load()) return true;
    if (states_.size() >= kStateQueueLimit) {
      states_.pop_front();
      kept_all = false;
    }
    states_.push_back(std::move(bytes));
  }
  cv_.notify_one();
  return kept_all;
}

void Session::close() {
  {
    const std::lock_guard<std::mutex> lock(mutex_);
    closing_ = true;
  }
  cv_.notify_one();
}

void Session::join() {
  if (writer_.joinable()) writer_.join();
  if (reader_.joinable()) reader_.join();
}

void Session::write_loop() {
  for (;;) {
    std::vector<std::uint8_t> out;
    {
      std::unique_lock<std::mutex> lock(mutex_);
      cv_.wait(lock, [&] { return closing_ || !control_.empty() || !states_.empty(); });
      if (!control_.empty()) {
        out = std::move(control_.front());
        control_.pop_front();
      } else if (!states_.empty()) {
        out = std::move(states_.front());
        states_.pop_front();
      } else {
        break;
      }
    }
    try {
      sock_.send_all(out);
    } catch (const net::NetError&) {
      break;
    }
  }
  {
    const std::lock_guard<std::mutex> lock(mutex_);
    writer_done_.store(true);
    control_.clear();
    states_.clear();
  }
  sock_.shutdown();
}

void Session::read_loop() {
  wire::FrameDecoder decoder;
  std::vector<std::uint8_t> buf(64 * 1024);
  while (!writer_done_.load()) {
    std::optional<std::size_t> n;
    try {
      n = sock_.recv_some(buf, kPollInterval);
    } catch (const net::NetError&) {
      break;
    }
    if (!n) break;
    if (*n == 0) continue;
    decoder.feed(std::span<const std::uint8_t>(buf.data(), *n));
    while (auto ev = decoder.next()) {
      if (ev->ok()) {
        server_.frames_received.fetch_add(1);
        handle(std::get<wire::Frame>(ev->value));
      } else {
        server_.frame_errors.fetch_add(1);
        const wire::WireError e = std::get<wire::WireError>(ev->value);
        error(wire::Frame{}, wire::error_code_for(e), std::string(wire::to_string(e)));
      }
    }
  }
  reader_done_.store(true);
  close();
}

void Session::reply(const wire::Frame& req, wire::AckMsg ack) {
  ack.request_type = req.msg_type;
  send_control(wire::encode_frame(MessageType::AckError, req.robot_id, wire::encode(ack)));
}

void Session::error(const wire::Frame& req, ErrorCode code, std::string message,
                    std::vector<std::string> violations) {
  wire::AckMsg ack;
  ack.code = code;
  ack.message = std::move(message);
  ack.violations = std::move(violations);
  reply(req, std::move(ack));
}

void Session::handle(const wire::Frame& f) {
  if (!wire::is_known_type(f.msg_type)) {
    error(f, ErrorCode::UnknownType, "unknown message type " + std::to_string(f.msg_type));
    return;
  }
  const auto type = static_cast<MessageType>(f.msg_type);
  if (type == MessageType::AckError) return;
  if (type == MessageType::SkillStatus) {
    error(f, ErrorCode::UnknownType, "SkillStatus is sent by the server only");
    return;
  }
  auto robot_it = server_.robots.find(f.robot_id);
  if (robot_it == server_.robots.end()) {
    error(f, ErrorCode::UnknownRobot, "no robot with id " + std::to_string(f.robot_id));
    return;
  }
  core::RobotCore& robot = *robot_it->second;
  try {
    switch (type) {
      case MessageType::ExecuteSkill: {
        skill::SkillSpec spec = wire::decode_skill_spec(f.payload);
        const std::lock_guard<std::mutex> lock(server_.dispatch_mutex);
        core::SubmitResult r = robot.submit(std::move(spec));
        switch (r.error) {
          case core::SubmitError::None: {
            server_.owners[{f.robot_id, r.skill_id}] = weak_from_this();
            wire::AckMsg ack;
            ack.value = r.skill_id;
            reply(f, std::move(ack));
            break;
          }
          case core::SubmitError::Invalid:
            error(f, ErrorCode::Invalid, "skill failed validation", std::move(r.violations));
            break;
          case core::SubmitError::Busy: error(f, ErrorCode::Busy, "a skill is already active and one queued"); break;
          case core::SubmitError::MailboxFull: error(f, ErrorCode::MailboxFull, "mailbox full"); break;
        }
        break;
      }
      case MessageType::PreemptSkill: {
        const wire::PreemptMsg m = wire::decode_preempt(f.payload);
        if (robot.preempt(m.skill_id)) {
          reply(f, wire::AckMsg{});
        } else {
          error(f, ErrorCode::MailboxFull, "mailbox full");
        }
        break;
      }
      case MessageType::RobotStateMsg: {
        try {
          send_control(wire::encode_frame(MessageType::RobotStateMsg, f.robot_id, wire::encode(robot.read_state())));
        } catch (const core::NotStarted& e) {
          error(f, ErrorCode::NotStarted, e.what());
        }
        break;
      }
      case MessageType::SensorMsg: {
        if (!robot.post_sensor(wire::decode_sensor(f.payload))) error(f, ErrorCode::MailboxFull, "mailbox full");
        break;
      }
      case MessageType::SubscribeState: {
        const wire::SubscribeMsg m = wire::decode_subscribe(f.payload);
        const std::uint32_t granted = cap_state_rate(m.rate_hz);
        {
          const std::lock_guard<std::mutex> lock(server_.dispatch_mutex);
          if (granted == 0) {
            subscriptions.erase(f.robot_id);
          } else {
            subscriptions[f.robot_id] = kMaxStateRate / granted;
          }
          server_.update_publish_divisor(f.robot_id);
        }
        wire::AckMsg ack;
        ack.value = granted;
        reply(f, std::move(ack));
        break;
      }
      case MessageType::SafetyReconfig: {
        safety::SafetyConfig cfg = wire::decode_safety(f.payload);
        if (auto err = safety::config_error(cfg)) {
          error(f, ErrorCode::Invalid, *err);
        } else if (!robot.reconfigure_safety(std::move(cfg))) {
          error(f, ErrorCode::MailboxFull, "mailbox full");
        } else {
          reply(f, wire::AckMsg{});
        }
        break;
      }
      case MessageType::InjectWrench: {
        const wire::InjectWrenchMsg m = wire::decode_inject(f.payload);
        if (!all_finite(m.wrench) || !std::isfinite(m.duration) || std::llround(m.duration * kTicksPerSecond) <= 0) {
          error(f, ErrorCode::Invalid, "wrench must be finite and duration at least one tick");
        } else if (!robot.inject_wrench(m.wrench, m.duration)) {
          error(f, ErrorCode::MailboxFull, "mailbox full");
        } else {
          reply(f, wire::AckMsg{});
        }
        break;
      }
      default: error(f, ErrorCode::UnknownType, "unexpected message type"); break;
    }
  } catch (const wire::WireException& e) {
    error(f, wire::error_code_for(e.kind()), e.what());
  } catch (const std::exception& e) {
    error(f, ErrorCode::Internal, e.what());
  }
}

}  // namespace

Server::Server(ServerConfig config) : impl_(std::make_unique<Impl>(std::move(config))) {}

Server::~Server() { stop(); }

void Server::start() {
  const std::lock_guard<std::mutex> lock(impl_->lifecycle_mutex);
  if (impl_->started) return;
  impl_->started = true;
  for (auto& [id, core] : impl_->robots) core->start();
  impl_->dispatcher = std::thread([this] { impl_->dispatch_loop(); });
  impl_->acceptor = std::thread([this] { impl_->accept_loop(); });
}

void Server::stop() {
  Impl& s = *impl_;
  const std::lock_guard<std::mutex> lock(s.lifecycle_mutex);
  if (!s.started || s.stopped) return;
  s.stopped = true;

  s.stopping.store(true);
  s.listener.close();
  if (s.acceptor.joinable()) s.acceptor.join();
  s.notify();
  if (s.dispatcher.joinable()) s.dispatcher.join();

  for (auto& [id, core] : s.robots) core->shutdown();
  s.pump();

  std::error_code ec;
  std::filesystem::create_directories(s.config.log_dir, ec);
  for (auto& [id, core] : s.robots) {
    try {
      core->flush_log(s.config.log_dir / ("robot_" + std::to_string(id) + ".filg"));
    } catch (const std::exception&) {
      // Nothing else can be done with a failing log directory at shutdown.
    }
  }

  std::vector<std::shared_ptr<Session>> sessions;
  {
    const std::lock_guard<std::mutex> dl(s.dispatch_mutex);
    sessions.swap(s.sessions);
  }
  for (auto& session : sessions) session->close();
  for (auto& session : sessions) session->join();
}

std::uint16_t Server::port() const { return impl_->listener.port(); }

const ServerConfig& Server::config() const { return impl_->config; }

core::RobotCore* Server::robot(std::uint16_t id) {
  auto it = impl_->robots.find(id);
  return it == impl_->robots.end() ? nullptr : it->second.get();
}

std::vector<std::uint16_t> Server::robot_ids() const {
  std::vector<std::uint16_t> ids;
  for (const auto& [id, _] : impl_->robots) ids.push_back(id);
  return ids;
}

ServerStats Server::stats() const {
  return ServerStats{impl_->sessions_accepted.load(), impl_->frames_received.load(), impl_->frame_errors.load(),
                     impl_->state_frames_dropped.load()};
}

}  // namespace skillstack::server
