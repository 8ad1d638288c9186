"""From deduplicated papers to the weighted collaboration network.

Scientists and papers form a bipartite network; projecting it onto the
scientists yields the TCN, where the weight of an edge counts the papers
the two endpoints share.
"""

from collabnet import (
    Gender,
    MajorField,
    PublicationRecord,
    ScientistRecord,
    cluster_duplicates,
    build_bipartite,
    giant_component,
    project_tcn,
)


def pub(title, year=2010, n=2):
    return PublicationRecord(title=title, year=year, author_count=n)


# ana and bruno co-wrote two papers; bruno and carla one; dora works alone
records = [
    ScientistRecord("ana", Gender.FEMALE, (MajorField.BIO,),
                    (pub("molecular clocks in fish"), pub("reef assembly rules"))),
    ScientistRecord("bruno", Gender.MALE, (MajorField.BIO,),
                    (pub("molecular clocks in fish"), pub("reef assembly rules"),
                     pub("currents and carbon", n=2))),
    ScientistRecord("carla", Gender.FEMALE, (MajorField.EXA,),
                    (pub("currents and carbon", n=2),)),
    ScientistRecord("dora", Gender.FEMALE, (MajorField.HUM,),
                    (pub("a lone monograph", n=1),)),
]

clusters = cluster_duplicates(records, threshold=0.10)
print(f"{sum(len(r.publications) for r in records)} records -> {len(clusters)} papers")

bn = build_bipartite(records, clusters)
print(f"bipartite: {bn.n_scientists} scientists, {bn.n_papers} papers, {bn.n_edges} links")

tcn = project_tcn(bn)
print("\nadjacency (neighbor, shared papers):")
for sid in tcn.node_ids:
    print(f"  {sid:6s} k={tcn.degree(sid)} s={tcn.strength(sid)} -> {tcn.neighbors(sid)}")

component, fraction = giant_component(tcn)
print(f"\ngiant component: {component} ({fraction:.0%} of all nodes)")
print("dora has a paper but no coauthors, so she stays as a degree-0 node")
