#pragma once

// Glue between the demo domain and the generic layers: consistency checkers
// over a payload store, network moves for path search, and fragment
// implementations for chain execution.

#include "conman/demo.hpp"
#include "conman/method.hpp"
#include "conman/resolution.hpp"

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace conman::demo {

using PayloadStore = std::map<std::string, DemoModel>;

/// Binds every relation of a context to the demo relation. Relations whose
/// two endpoint types coincide (merges) use the identity kind map; all
/// others use `km`. The store is shared so that moves can add payloads.
class DemoRelations {
public:
    DemoRelations(Context context, std::shared_ptr<PayloadStore> store, KindMap km);

    const KindMap& kind_map_for(const std::string& relation) const;
    RelationRegistry registry() const;
    CheckOutcome check(const std::string& relation, const PayloadRef& src, const PayloadRef& trg) const;

    const std::shared_ptr<PayloadStore>& store() const { return store_; }
    const Context& context() const { return context_; }

private:
    Context context_;
    std::shared_ptr<PayloadStore> store_;
    KindMap km_;
    KindMap identity_ = KindMap::identity();
    std::map<std::string, bool> is_merge_;
};

/// Stores `m` under a content-derived reference "<node>_v<version>_<hash>"
/// and returns the reference.
std::string store_payload(PayloadStore& store, const std::string& node, int version, const DemoModel& m);

/// "demo-sync-fwd": for each inconsistent edge with a non-authoritative
/// target model, replace it by the forward synchronisation of its source.
/// "demo-sync-bwd": the same against the edge direction.
MoveGenerator demo_sync_move(std::shared_ptr<const DemoRelations> relations, std::shared_ptr<const Schema> schema,
                             method::Direction direction);

/// Resolves a move list such as "demo-sync" or "demo-sync-bwd,demo-sync-fwd".
std::vector<MoveGenerator> demo_moves(const std::string& spec, std::shared_ptr<const DemoRelations> relations,
                                      std::shared_ptr<const Schema> schema);

struct DemoImplOptions {
    KindMap km = KindMap::identity();
    std::uint64_t seed = 1;
    std::size_t size = 3;
    IntPolicy policy = IntPolicy::SourceWins;
    std::optional<Side> authority;
};

/// Reference implementations of all nine catalogue fragments. Checking
/// fragments report their verdict through the step context. Incremental GEN
/// reads the current models from the correspondence it is given.
method::ImplRegistry demo_impls(const DemoImplOptions& options);

/// Binds the SUT pseudo-fragments to a model transformer. The incremental
/// variant applies the source delta, transforms the whole model, and returns
/// the target delta against the previous correspondence.
void bind_sut(method::ImplRegistry& impls, std::function<DemoModel(const DemoModel&)> transform);

/// Forward transformation used by the bundled reference SUT.
DemoModel reference_transform(const DemoModel& ms, const KindMap& km);
/// Deliberately broken variant: drops the last element.
DemoModel mutant_transform(const DemoModel& ms, const KindMap& km);

} // namespace conman::demo
