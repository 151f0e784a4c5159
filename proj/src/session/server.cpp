/*
 * Copyright 2026 The Handbrain Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "handbrain/session/server.hpp"

#include <atomic>
#include <boost/asio/ip/tcp.hpp>
#include <boost/asio/steady_timer.hpp>
#include <boost/asio/strand.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/websocket.hpp>
#include <chrono>
#include <ctime>
#include <deque>
#include <iostream>
#include <thread>

#include "handbrain/session/codec.hpp"
#include "handbrain/session/log.hpp"
#include "handbrain/session/machine.hpp"
#include "handbrain/util/json_fields.hpp"

namespace handbrain::session {

namespace beast = boost::beast;
namespace websocket = beast::websocket;
namespace net = boost::asio;
using tcp = net::ip::tcp;

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::string make_session_id(std::uint64_t counter) {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%Y%m%d-%H%M%S", &tm);
  return "session-" + std::string(stamp) + "-" + std::to_string(counter);
}

// Client messages become intents stamped with the server's clock.
Intent to_intent(const wire::Message& m, Millis now) {
  return std::visit(
      Overloaded{
          [&](const wire::ChooseMode& x) -> Intent { return intent::ChooseMode{now, x.mode}; },
          [&](const wire::ChoosePiece& x) -> Intent { return intent::ChoosePiece{now, x.piece}; },
          [&](const wire::SubmitMove& x) -> Intent { return intent::SubmitMove{now, x.uci}; },
          [&](const wire::GazeBatch& x) -> Intent { return intent::SubmitGaze{now, x.samples, {}}; },
          [&](const wire::EmotionBatch& x) -> Intent { return intent::SubmitEmotion{now, x.samples}; },
          [&](const wire::Resign&) -> Intent { return intent::Resign{now}; },
          [&](const auto& other) -> Intent {
            throw ProtocolError(ProtocolErrorCode::kBadPayload,
                                "clients may not send '" + std::string(wire::kind_of(other)) + "'");
          },
      },
      m);
}

class Connection : public std::enable_shared_from_this<Connection> {
 public:
  Connection(tcp::socket socket, const ServerConfig& cfg, std::string id)
      : ws_(std::move(socket)), timer_(ws_.get_executor()), cfg_(cfg), id_(std::move(id)) {}

  void start() {
    ws_.async_accept(beast::bind_front_handler(&Connection::on_accept, shared_from_this()));
  }

 private:
  Millis now() const {
    return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - origin_)
        .count();
  }

  void apply(const Intent& in) {
    auto r = step(state_, in, agents_);
    state_ = std::move(r.state);
    for (const auto& e : r.events) {
      writer_->append(e);
      log_.push_back(e);
    }
  }

  void on_accept(beast::error_code ec) {
    if (ec) return;
    origin_ = std::chrono::steady_clock::now();
    try {
      teammate_ = engine::make_engine(cfg_.teammate);
      opponent_ = engine::make_engine(cfg_.opponent);
      agents_ = Agents{teammate_.get(), opponent_.get()};
      writer_.emplace(cfg_.logdir / (id_ + ".jsonl"));
      nlohmann::json meta{{"session_id", id_}, {"teammate", cfg_.teammate}, {"opponent", cfg_.opponent}};
      apply(intent::Start{0, cfg_.player, "", meta});
      send(wire::make_state(state_, id_, now()));
      play_opponent();
    } catch (const Error& e) {
      send(wire::ErrorReply{"startup", e.what(), ""});
      finish_after_writes_ = true;
      flush();
      return;
    }
    arm_timer();
    do_read();
  }

  void play_opponent() {
    while (state_.phase == Phase::kOpponentThinking) {
      apply(intent::OpponentTurn{now()});
      send(wire::make_state(state_, id_, now()));
    }
  }

  void do_read() { ws_.async_read(buffer_, beast::bind_front_handler(&Connection::on_read, shared_from_this())); }

  void on_read(beast::error_code ec, std::size_t) {
    if (ec) {
      on_disconnect();
      return;
    }
    const std::string text = beast::buffers_to_string(buffer_.data());
    buffer_.consume(buffer_.size());
    handle(text);
    if (state_.finished()) {
      timer_.cancel();
      finish_after_writes_ = true;
      flush();
      return;
    }
    arm_timer();
    do_read();
  }

  void handle(const std::string& text) {
    try {
      const wire::Message msg = wire::decode(text);
      apply(to_intent(msg, now()));
      send(wire::make_state(state_, id_, now()));
      play_opponent();
    } catch (const util::SchemaError& e) {
      send(wire::ErrorReply{"schema", e.what(), e.path()});
    } catch (const ProtocolError& e) {
      send(wire::ErrorReply{std::string(to_string(e.code())), e.what(), ""});
    } catch (const EngineError& e) {
      send(wire::ErrorReply{"engine", e.what(), ""});
    } catch (const Error& e) {
      send(wire::ErrorReply{"error", e.what(), ""});
    }
  }

  void on_disconnect() {
    timer_.cancel();
    if (!state_.finished() && state_.phase != Phase::kNotStarted) {
      try {
        apply(intent::Abort{now(), "disconnected"});
      } catch (const std::exception& e) {
        std::cerr << id_ << ": could not record abort: " << e.what() << "\n";
      }
    }
  }

  // Ticks once per whole second of thinking time while the mode choice is
  // pending.
  void arm_timer() {
    if (!cfg_.predictor || state_.phase != Phase::kAwaitModeChoice) return;
    const Millis since = now() - state_.turn_start_t;
    const Millis next = state_.turn_start_t + (since / 1000 + 1) * 1000;
    timer_.expires_at(origin_ + std::chrono::milliseconds(next));
    timer_.async_wait(beast::bind_front_handler(&Connection::on_tick, shared_from_this(), state_.turn));
  }

  void on_tick(int turn, beast::error_code ec) {
    if (ec || state_.phase != Phase::kAwaitModeChoice || state_.turn != turn) return;
    const Millis t = now();
    const double elapsed = static_cast<double>((t - state_.turn_start_t) / 1000);
    try {
      if (auto p = cfg_.predictor(log_, t)) {
        apply(intent::EmitPrediction{t, elapsed, *p});
        send(wire::Prediction{state_.turn, elapsed, *p});
      }
    } catch (const std::exception& e) {
      std::cerr << id_ << ": prediction failed: " << e.what() << "\n";
    }
    arm_timer();
  }

  void send(const wire::Message& m) {
    outbox_.push_back(wire::encode(m));
    flush();
  }

  void flush() {
    if (writing_) return;
    if (outbox_.empty()) {
      if (finish_after_writes_ && !closing_) {
        closing_ = true;
        ws_.async_close(websocket::close_code::normal,
                        [self = shared_from_this()](beast::error_code) {});
      }
      return;
    }
    writing_ = true;
    ws_.text(true);
    ws_.async_write(net::buffer(outbox_.front()),
                    beast::bind_front_handler(&Connection::on_write, shared_from_this()));
  }

  void on_write(beast::error_code ec, std::size_t) {
    writing_ = false;
    if (ec) return;
    outbox_.pop_front();
    flush();
  }

  websocket::stream<beast::tcp_stream> ws_;
  net::steady_timer timer_;
  beast::flat_buffer buffer_;
  const ServerConfig& cfg_;
  std::string id_;
  std::chrono::steady_clock::time_point origin_;
  std::unique_ptr<engine::Engine> teammate_;
  std::unique_ptr<engine::Engine> opponent_;
  Agents agents_;
  SessionState state_;
  SessionLog log_;
  std::optional<LogWriter> writer_;
  std::deque<std::string> outbox_;
  bool writing_ = false;
  bool finish_after_writes_ = false;
  bool closing_ = false;
};

}  // namespace

struct Server::Impl {
  explicit Impl(ServerConfig c) : cfg(std::move(c)), ioc(std::max(1, cfg.threads)), acceptor(ioc) {
    cfg.teammate.validate();
    cfg.opponent.validate();
    std::filesystem::create_directories(cfg.logdir);
    const tcp::endpoint endpoint(net::ip::make_address(cfg.address), cfg.port);
    beast::error_code ec;
    acceptor.open(endpoint.protocol(), ec);
    if (!ec) acceptor.set_option(net::socket_base::reuse_address(true), ec);
    if (!ec) acceptor.bind(endpoint, ec);
    if (!ec) acceptor.listen(net::socket_base::max_listen_connections, ec);
    if (ec) throw UsageError("cannot listen on " + cfg.address + ":" + std::to_string(cfg.port) + ": " + ec.message());
  }

  void accept() {
    acceptor.async_accept(net::make_strand(ioc), [this](beast::error_code ec, tcp::socket socket) {
      if (ec) return;
      std::make_shared<Connection>(std::move(socket), cfg, make_session_id(++counter))->start();
      accept();
    });
  }

  ServerConfig cfg;
  net::io_context ioc;
  tcp::acceptor acceptor;
  std::atomic<std::uint64_t> counter{0};
};

Server::Server(ServerConfig cfg) : impl_(std::make_unique<Impl>(std::move(cfg))) {}

Server::~Server() = default;

std::uint16_t Server::port() const { return impl_->acceptor.local_endpoint().port(); }

void Server::run() {
  impl_->accept();
  std::vector<std::thread> extra;
  for (int i = 1; i < impl_->cfg.threads; ++i) extra.emplace_back([this] { impl_->ioc.run(); });
  impl_->ioc.run();
  for (auto& t : extra) t.join();
}

void Server::stop() { impl_->ioc.stop(); }

}  // namespace handbrain::session
