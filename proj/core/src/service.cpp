#include "frictionsim/service.hpp"

#include <atomic>
#include <chrono>
#include <deque>
#include <mutex>
#include <set>
#include <thread>
#include <utility>
#include <vector>

#include <boost/asio/ip/tcp.hpp>
#include <boost/asio/post.hpp>
#include <boost/asio/strand.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/websocket.hpp>

#include "frictionsim/errors.hpp"
#include "frictionsim/protocol.hpp"

namespace frictionsim {
namespace {

namespace beast = boost::beast;
namespace websocket = beast::websocket;
namespace net = boost::asio;
using tcp = net::ip::tcp;

// Outgoing snapshots beyond this backlog are dropped for a slow client;
// command replies are always queued.
constexpr std::size_t kMaxQueuedSnapshots = 32;

class Connection;

struct Inbound {
  std::weak_ptr<Connection> from;
  std::string text;
};

// Thread-safe inbox drained by the simulation thread once per tick.
class CommandQueue {
public:
  void push(Inbound item) {
    std::lock_guard lock(mutex_);
    items_.push_back(std::move(item));
  }
  std::vector<Inbound> drain() {
    std::lock_guard lock(mutex_);
    std::vector<Inbound> out(std::make_move_iterator(items_.begin()), std::make_move_iterator(items_.end()));
    items_.clear();
    return out;
  }

private:
  std::mutex mutex_;
  std::deque<Inbound> items_;
};

class Connection : public std::enable_shared_from_this<Connection> {
public:
  Connection(tcp::socket socket, CommandQueue& inbox, std::set<std::shared_ptr<Connection>>& registry)
      : ws_(std::move(socket)), inbox_(inbox), registry_(registry) {}

  void start() {
    ws_.set_option(websocket::stream_base::timeout::suggested(beast::role_type::server));
    ws_.text(true);
    ws_.async_accept([self = shared_from_this()](beast::error_code ec) {
      if (ec) return;
      self->registry_.insert(self);
      self->read();
    });
  }

  // Called on the I/O thread only.
  void send(std::shared_ptr<const std::string> message, bool droppable) {
    if (closed_) return;
    if (droppable && queue_.size() >= kMaxQueuedSnapshots) return;
    queue_.push_back(std::move(message));
    if (queue_.size() == 1) write();
  }

private:
  void read() {
    ws_.async_read(buffer_, [self = shared_from_this()](beast::error_code ec, std::size_t) {
      if (ec) {
        self->close();
        return;
      }
      self->inbox_.push({self, beast::buffers_to_string(self->buffer_.data())});
      self->buffer_.consume(self->buffer_.size());
      self->read();
    });
  }

  void write() {
    ws_.async_write(net::buffer(*queue_.front()), [self = shared_from_this()](beast::error_code ec, std::size_t) {
      if (ec) {
        self->close();
        return;
      }
      self->queue_.pop_front();
      if (!self->queue_.empty()) self->write();
    });
  }

  void close() {
    closed_ = true;
    queue_.clear();
    registry_.erase(shared_from_this());
  }

  websocket::stream<beast::tcp_stream> ws_;
  beast::flat_buffer buffer_;
  std::deque<std::shared_ptr<const std::string>> queue_;
  CommandQueue& inbox_;
  std::set<std::shared_ptr<Connection>>& registry_;
  bool closed_ = false;
};

}  // namespace

struct Service::Impl {
  Impl(Scenario scenario, ServiceOptions opts)
      : options(std::move(opts)), controller(std::move(scenario), options.record_dir), acceptor(ioc) {
    beast::error_code ec;
    const auto address = net::ip::make_address(options.host, ec);
    if (ec) throw BindError("invalid address '" + options.host + "': " + ec.message());
    const tcp::endpoint endpoint(address, options.port);
    acceptor.open(endpoint.protocol(), ec);
    if (!ec) acceptor.set_option(net::socket_base::reuse_address(true), ec);
    if (!ec) acceptor.bind(endpoint, ec);
    if (!ec) acceptor.listen(net::socket_base::max_listen_connections, ec);
    if (ec) throw BindError("cannot listen on " + options.host + ":" + std::to_string(options.port) + ": " +
                            ec.message());
    bound_port = acceptor.local_endpoint().port();
  }

  void accept() {
    acceptor.async_accept(net::make_strand(ioc), [this](beast::error_code ec, tcp::socket socket) {
      if (ec) return;
      std::make_shared<Connection>(std::move(socket), inbox, registry)->start();
      accept();
    });
  }

  void post_to(const std::weak_ptr<Connection>& to, std::string text) {
    auto message = std::make_shared<const std::string>(std::move(text));
    net::post(ioc, [to, message] {
      if (auto conn = to.lock()) conn->send(message, false);
    });
  }

  void broadcast(std::string text) {
    auto message = std::make_shared<const std::string>(std::move(text));
    net::post(ioc, [this, message] {
      for (const auto& conn : registry) conn->send(message, true);
    });
  }

  // Real-time loop at the scene's dt. Commands are applied between ticks.
  void simulate() {
    using clock = std::chrono::steady_clock;
    auto deadline = clock::now();
    double broadcast_phase = 1.0;  // first tick broadcasts
    while (running.load()) {
      for (auto& in : inbox.drain()) {
        std::string reply;
        try {
          reply = controller.apply(parse_command(in.text));
        } catch (const ParseError& e) {
          reply = malformed_reply(e.what());
        }
        post_to(in.from, std::move(reply));
      }

      controller.tick();
      const double dt = controller.simulation().scene().dt;
      broadcast_phase += options.broadcast_hz * dt;
      if (broadcast_phase >= 1.0) {
        broadcast_phase -= 1.0;
        if (broadcast_phase >= 1.0) broadcast_phase = 0.0;
        broadcast(to_json(controller.snapshot()));
      }

      deadline += std::chrono::duration_cast<clock::duration>(std::chrono::duration<double>(dt));
      const auto now = clock::now();
      if (deadline > now) {
        std::this_thread::sleep_until(deadline);
      } else if (now - deadline > std::chrono::milliseconds(100)) {
        deadline = now;  // fell too far behind; don't try to catch up
      }
    }
  }

  ServiceOptions options;
  SessionController controller;
  net::io_context ioc{1};
  tcp::acceptor acceptor;
  unsigned short bound_port = 0;
  CommandQueue inbox;
  std::set<std::shared_ptr<Connection>> registry;  // I/O thread only
  std::atomic<bool> running{false};
  std::thread io_thread;
  std::thread sim_thread;
};

Service::Service(Scenario scenario, ServiceOptions options)
    : impl_(std::make_unique<Impl>(std::move(scenario), std::move(options))) {}

Service::~Service() { stop(); }

void Service::start() {
  if (impl_->running.exchange(true)) return;
  impl_->accept();
  impl_->io_thread = std::thread([this] { impl_->ioc.run(); });
  impl_->sim_thread = std::thread([this] { impl_->simulate(); });
}

void Service::stop() {
  if (!impl_->running.exchange(false)) return;
  if (impl_->sim_thread.joinable()) impl_->sim_thread.join();
  net::post(impl_->ioc, [this] {
    beast::error_code ec;
    impl_->acceptor.close(ec);
    impl_->registry.clear();
  });
  impl_->ioc.stop();
  if (impl_->io_thread.joinable()) impl_->io_thread.join();
}

unsigned short Service::port() const { return impl_->bound_port; }

std::string Service::address() const { return impl_->options.host + ":" + std::to_string(impl_->bound_port); }

}  // namespace frictionsim
