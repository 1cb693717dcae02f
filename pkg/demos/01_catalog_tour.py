"""
Touring the bundled control catalog
===================================

The catalog is a tree: six domains at the top, ISO classes and controls
below them, and one scorable "assessment issue" question under each
control. This script walks the bundled ISO 27001 catalog and shows the
basic lookups.
"""

from readiness import NodeKind, find_node, leaves, load_bundled_catalog, nodes_of_kind

catalog = load_bundled_catalog()
print(f"catalog: {catalog.name} v{catalog.version} (scale 0..{catalog.scale_max})")

# the six domain views
for domain in catalog.root.children:
    controls = nodes_of_kind(catalog, NodeKind.CONTROL)
    mine = [c for c in controls if c.id.startswith(domain.id + ".")]
    print(f"  {domain.name:<20} {len(mine)} controls")

print(f"\ntotal controls: {len(nodes_of_kind(catalog, NodeKind.CONTROL))}")
print(f"scorable issues: {len(leaves(catalog))}")

# every node is addressable by id
control = find_node(catalog, "org.allocation")
print(f"\n{control.id}: {control.name}")
question = control.children[0]
print(f"  question: {question.description}")

# the full tree, indented by depth
print("\nfull tree:")


def show(node, depth=0):
    print(f"{'  ' * depth}[{node.kind.value}] {node.name}")
    for child in node.children:
        show(child, depth + 1)


show(catalog.root)
