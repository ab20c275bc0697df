"""Regenerate src/layernet/fixtures/cpwe_fixture.lgm.

A synthetic plant-wide Ethernet cell with a three-host virtualized server
farm.  Wiring is invented; only the per-layer element counts are fixed
targets (functional 4/2/16, service 45/132/45, logical 34/33/89,
physical 11/24).
"""

from itertools import combinations
from pathlib import Path

OUT = Path(__file__).resolve().parents[1] / "src" / "layernet" / "fixtures" / "cpwe_fixture.lgm"

ETH = "ethernet"
IEEE = "IEEE-802.3,IEEE-802.1Q"

# ---------------------------------------------------------------- physical
core = ["sw_core1", "sw_core2"]
dist = ["sw_dist1", "sw_dist2"]
access = ["sw_acc1", "sw_acc2"]
switches = core + dist + access
esxi = ["esxi1", "esxi2", "esxi3"]
workstations = ["ws_eng", "ws_ops"]
physical = switches + esxi + workstations
location = {"sw_core1": "server_room", "sw_core2": "server_room", "esxi1": "server_room",
            "esxi2": "server_room", "esxi3": "server_room", "sw_dist1": "plant_floor_a",
            "sw_dist2": "plant_floor_b", "sw_acc1": "cell_1", "sw_acc2": "cell_2",
            "ws_eng": "control_room", "ws_ops": "cell_1"}

phys_links = [("sw_core1", "sw_core2"), ("sw_dist1", "sw_dist2"), ("sw_acc1", "sw_acc2")]
phys_links += [(c, d) for c in core for d in dist]
phys_links += [(d, a) for d in dist for a in access]
phys_links += [(h, c) for h in esxi for c in core]
phys_links += [(w, a) for w in workstations for a in access]
phys_links += list(combinations(esxi, 2))  # storage appliance replication mesh

# ---------------------------------------------------------------- logical
vlans = ["vlan_mgmt", "vlan_vmotion", "vlan_vsa", "vlan_server", "vlan_cell1", "vlan_cell2"]
vrs = ["vr_core_a", "vr_core_b", "vr_dist_a", "vr_dist_b"]
cos = {f"cos_{p}": p for p in physical}
vms = {
    "vm_ad": "esxi1", "vm_dhcp": "esxi1", "vm_ntp": "esxi1", "vm_lms": "esxi1",
    "vm_vcenter": "esxi2", "vm_vum": "esxi2", "vm_vsa_manager": "esxi2", "vm_ftdirectory": "esxi2",
    "vm_ftview": "esxi3", "vm_ftassetcentre": "esxi3", "vm_fthistorian": "esxi3",
    "vm_ftbatch": "esxi3", "vm_ftlinx": "esxi1",
}
vlan_span = {
    "vlan_mgmt": physical,
    "vlan_vmotion": switches + esxi,
    "vlan_vsa": switches + esxi,
    "vlan_server": switches + esxi,
    "vlan_cell1": physical,
    "vlan_cell2": switches + workstations,
}
vr_span = {"vr_core_a": core, "vr_core_b": core, "vr_dist_a": dist, "vr_dist_b": dist}

vm_vlan = {
    "vm_ad": "vlan_server", "vm_dhcp": "vlan_server", "vm_ntp": "vlan_server",
    "vm_lms": "vlan_mgmt", "vm_vcenter": "vlan_mgmt", "vm_vum": "vlan_vmotion",
    "vm_vsa_manager": "vlan_vsa", "vm_ftdirectory": "vlan_server", "vm_ftview": "vlan_cell1",
    "vm_ftassetcentre": "vlan_server", "vm_fthistorian": "vlan_server", "vm_ftbatch": "vlan_cell1",
    "vm_ftlinx": "vlan_cell1",
}
cos_vlan = {f"cos_{s}": "vlan_mgmt" for s in switches}
cos_vlan.update({f"cos_{h}": "vlan_vsa" for h in esxi})
cos_vlan.update({"cos_ws_eng": "vlan_cell1", "cos_ws_ops": "vlan_cell2"})
log_links = list(vm_vlan.items()) + list(cos_vlan.items())
log_links += [("vr_core_a", "vr_core_b"), ("vr_core_a", "vr_dist_a"), ("vr_core_b", "vr_dist_b"),
              ("vlan_mgmt", "vr_core_a"), ("vlan_vmotion", "vr_core_a"), ("vlan_vsa", "vr_core_b"),
              ("vlan_server", "vr_core_b"), ("vlan_cell1", "vr_dist_a"), ("vlan_cell2", "vr_dist_b")]

# ---------------------------------------------------------------- service
servers = {
    "ad": ("vm_ad", "ldap,kerberos,dns"), "dns_server": ("vm_ad", "dns"),
    "dhcp_server": ("vm_dhcp", "dhcp"), "ntp_server": ("vm_ntp", "ntp"),
    "lms": ("vm_lms", "snmp,ssh,syslog,https"), "vcenter": ("vm_vcenter", "vsphere-api,https"),
    "vum": ("vm_vum", "vsphere-api,https"), "vsa_manager": ("vm_vsa_manager", "vsphere-api,iscsi"),
    "ft_directory": ("vm_ftdirectory", "ft-cip,ldap"), "ft_view_se": ("vm_ftview", "ft-cip,https"),
    "ft_assetcentre": ("vm_ftassetcentre", "ft-cip"), "ft_historian": ("vm_fthistorian", "ft-cip,opc"),
    "ft_batch": ("vm_ftbatch", "ft-cip"), "ft_linx": ("vm_ftlinx", "ft-cip,opc"),
}
services = dict(servers)
for s in switches:
    services[f"mgmt_agent_{s}"] = (f"cos_{s}", "snmp,ssh,syslog")
for h in esxi:
    services[f"hv_agent_{h}"] = (f"cos_{h}", "vsphere-api,iscsi")
for p in physical:
    services[f"ntp_client_{p}"] = (f"cos_{p}", "ntp")
for h in esxi + workstations:
    services[f"dns_client_{h}"] = (f"cos_{h}", "dns")
for w in workstations:
    services[f"dhcp_client_{w}"] = (f"cos_{w}", "dhcp")
    services[f"ft_client_{w}"] = (f"cos_{w}", "ft-cip,ldap,opc")
    services[f"browser_{w}"] = (f"cos_{w}", "https")

svc_links = []
svc_links += [(f"ntp_client_{p}", "ntp_server") for p in physical]                  # 11
svc_links += [(f"dns_client_{h}", "dns_server") for h in esxi + workstations]      # 5
svc_links += [(f"dhcp_client_{w}", "dhcp_server") for w in workstations]           # 2
svc_links += [(f"mgmt_agent_{s}", "lms") for s in switches]                          # 6
svc_links += [(f"hv_agent_{h}", x) for h in esxi for x in ("vcenter", "vum", "vsa_manager")]  # 9
svc_links += [("dns_server", x) for x in ("ad", "ntp_server")]                        # 2
ft = ["ft_directory", "ft_view_se", "ft_assetcentre", "ft_historian", "ft_batch", "ft_linx"]
svc_links += list(combinations(ft, 2))                                                # 15
svc_links += [(x, "ad") for x in ft]                                                  # 6
svc_links += [(x, "dns_server") for x in ft]                                          # 6
svc_links += [(x, "ntp_server") for x in ft]                                          # 6
svc_links += [(f"ft_client_{w}", x) for w in workstations for x in ft]              # 12
svc_links += [(f"browser_{w}", x) for w in workstations
              for x in ("lms", "vcenter", "vum", "ft_view_se")]                     # 8
svc_links += [(x, y) for x in ("lms", "vcenter", "vum", "vsa_manager")
              for y in ("ad", "dns_server", "ntp_server")]                          # 12
svc_links += [("vcenter", "vum"), ("vcenter", "vsa_manager"), ("vum", "vsa_manager")]  # 3
svc_links += [(f"mgmt_agent_{s}", "ntp_server") for s in switches]                   # 6
svc_links += [(f"hv_agent_{h}", "ntp_server") for h in esxi]                         # 3
svc_links += [(f"mgmt_agent_{a}", f"mgmt_agent_{b}") for a, b in phys_links
              if a in switches and b in switches]                                   # 11 (CDP neighbours)
svc_links += [(f"ft_client_{w}", "dns_server") for w in workstations]               # 2
svc_links += [(f"ft_client_{w}", "dhcp_server") for w in workstations]              # 2
svc_links += [("lms", "dhcp_server"), ("ad", "dhcp_server")]                          # 2
svc_links += [(f"hv_agent_{a}", f"hv_agent_{b}") for a, b in combinations(esxi, 2)]  # 3

# ---------------------------------------------------------------- functional
functional = {
    "iacs_provider": ft + ["ad", "dns_server"],
    "iacs_subscriber": [f"ft_client_{w}" for w in workstations],
    "nms_provider": ["lms", "vcenter", "vum", "vsa_manager"],
    "nms_subscriber": [f"browser_{w}" for w in workstations],
}
fun_links = [("iacs_provider", "iacs_subscriber"), ("nms_provider", "nms_subscriber")]


def main():
    out = ["# Synthetic CPwE-scale model: manufacturing zone with a virtualized",
           "# three-host server farm.  Regenerate with scripts/build_cpwe_fixture.py.",
           "model cpwe_fixture", ""]
    for f in functional:
        proto = "ft-cip" if f.startswith("iacs") else "https"
        out.append(f"component functional {f} protocols={proto} standards=IEC-62443")
    for a, b in fun_links:
        out.append(f"link functional {a} {b}")
    for f, targets in functional.items():
        out += [f"map {f} {t}" for t in targets]
    out.append("")
    for s, (_, proto) in services.items():
        out.append(f"component service {s} protocols={proto},tcp,udp standards=IETF-RFC")
    for a, b in svc_links:
        out.append(f"link service {a} {b}")
    out += [f"map {s} {host}" for s, (host, _) in services.items()]
    out.append("")
    for v in vlans + vrs + list(cos) + list(vms):
        out.append(f"component logical {v} protocols=ipv4 standards=IETF-RFC791")
    for a, b in log_links:
        out.append(f"link logical {a} {b}")
    out += [f"map {v} {p}" for v, span in vlan_span.items() for p in span]
    out += [f"map {v} {p}" for v, span in vr_span.items() for p in span]
    out += [f"map {c} {p}" for c, p in cos.items()]
    out += [f"map {v} {h}" for v, h in vms.items()]
    out.append("")
    for p in physical:
        out.append(f"component physical {p} protocols={ETH} standards={IEEE} location={location[p]}")
    for a, b in phys_links:
        out.append(f"link physical {a} {b}")
    out.append("")
    out.append("requirement r_iacs iacs_subscriber iacs_provider min_replicas=2 min_locations=1")
    out.append("requirement r_nms nms_subscriber nms_provider min_replicas=2")
    OUT.write_text("\n".join(out) + "\n", encoding="utf-8")

    counts = {
        "functional": (len(functional), len(fun_links), sum(map(len, functional.values())), len(services)),
        "service": (len(services), len(set(map(frozenset, svc_links))), len(services),
                    len(vlans) + len(vrs) + len(cos) + len(vms)),
        "logical": (len(vlans) + len(vrs) + len(cos) + len(vms), len(log_links),
                    sum(map(len, vlan_span.values())) + sum(map(len, vr_span.values())) + len(cos) + len(vms),
                    len(physical)),
        "physical": (len(physical), len(phys_links)),
    }
    for k, v in counts.items():
        print(k, v)


if __name__ == "__main__":
    main()
