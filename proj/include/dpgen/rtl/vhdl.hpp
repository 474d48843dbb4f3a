// Copyright 2026 The dpgen Authors
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

// VHDL-2008 emission. The output uses plain std_logic_1164 constructs only:
// no vendor primitives, no numeric_std arithmetic on buses. All
// program-specific content (mux inputs, FSM transition tables, payload
// control memory) lives in the package; the entities are generic over it.
//
// Interface contract: phv_data and phv_valid must be held stable from the
// phv_valid_strobe cycle until the beat carrying tlast is accepted.

#pragma once

#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "dpgen/error.hpp"
#include "dpgen/rtl/design.hpp"
#include "dpgen/rtl/identifiers.hpp"

namespace dpgen::rtl {

struct HdlFile {
  std::string name;
  std::string text;

  friend bool operator==(const HdlFile&, const HdlFile&) = default;
};

struct HdlOutput {
  std::vector<HdlFile> files;
  std::vector<std::string> notes;  // identifier mangling
};

namespace detail {

inline std::string vhdl_bits(const ValidBits& b) { return "\"" + b.to_string() + "\""; }

inline const char* kBanner =
    "-- Generated by dpgen. Do not edit.\n"
    "-- VHDL-2008, vendor-agnostic synthesizable subset.\n\n";

inline std::string header_libs(const std::string& top) {
  return "library ieee;\nuse ieee.std_logic_1164.all;\n\nuse work." + top + "_pkg.all;\n\n";
}

inline std::string emit_package(const StructuralDesign& d, const std::vector<std::string>& ids) {
  const std::string& top = d.top_name;
  std::ostringstream os;
  os << kBanner << "library ieee;\nuse ieee.std_logic_1164.all;\n\n";
  os << "package " << top << "_pkg is\n";
  os << "  constant BUS_WIDTH       : natural := " << d.bus_width_bits << ";\n";
  os << "  constant BUS_BYTES       : natural := " << d.lane_bytes() << ";\n";
  os << "  constant PHV_DATA_WIDTH  : natural := " << d.phv_data_width_bits << ";\n";
  os << "  constant PHV_VALID_WIDTH : natural := " << d.phv_valid_width_bits << ";\n";
  os << "  constant NUM_HEADERS     : natural := " << d.layout.instances.size() << ";\n";
  os << "  -- Fixed cycles added to the beat count of every packet.\n";
  os << "  constant PIPELINE_DEPTH  : natural := " << d.pipeline_depth << ";\n\n";

  os << "  subtype valid_t is std_logic_vector(PHV_VALID_WIDTH - 1 downto 0);\n";
  os << "  subtype byte_t is std_logic_vector(7 downto 0);\n";
  os << "  type natural_array is array (natural range <>) of natural;\n\n";

  os << "  type header_info_t is record\n"
        "    valid_bit   : natural;\n"
        "    offset_bits : natural;\n"
        "    bytes       : natural;\n"
        "  end record;\n\n";
  for (std::size_t i = 0; i < d.layout.instances.size(); ++i) {
    const auto& h = d.layout.instances[i];
    os << "  constant " << ids[i] << " : header_info_t := (valid_bit => " << h.valid_bit_index
       << ", offset_bits => " << h.phv_data_offset_bits << ", bytes => " << h.bytes() << ");\n";
  }
  if (!d.layout.instances.empty()) os << "\n";

  os << "  type transition_t is record\n"
        "    from_state : natural;\n"
        "    to_state   : natural;\n"
        "    mask       : valid_t;\n"
        "    value      : valid_t;\n"
        "  end record;\n"
        "  type transition_array is array (natural range <>) of transition_t;\n\n";
  os << "  type payload_ctrl_t is record\n"
        "    valid      : valid_t;\n"
        "    rotate     : natural;\n"
        "    delay_mask : std_logic_vector(BUS_BYTES - 1 downto 0);\n"
        "  end record;\n"
        "  type payload_ctrl_array is array (natural range <>) of payload_ctrl_t;\n\n";

  auto base_array = [&](const std::string& name, const std::vector<std::size_t>& base) {
    os << "  constant " << name << " : natural_array(0 to BUS_BYTES) := (";
    for (std::size_t i = 0; i < base.size(); ++i) {
      os << (i ? ", " : "") << i << " => " << base[i];
    }
    os << ");\n";
  };

  // Mux tables.
  std::vector<std::size_t> mux_base{0}, trans_base{0};
  for (const auto& p : d.lane_plans) {
    mux_base.push_back(mux_base.back() + p.mux_inputs.size());
    std::size_t rows = 0;
    for (const auto& t : p.transitions) rows += t.guard.size();
    trans_base.push_back(trans_base.back() + rows);
  }
  os << "  -- Lane l multiplexes LANE_MUX_OFFSETS(LANE_MUX_BASE(l) .. LANE_MUX_BASE(l + 1) - 1);\n"
        "  -- FSM state k >= 1 selects the byte at PHV_data bit offset entry k - 1.\n";
  base_array("LANE_MUX_BASE", mux_base);
  if (mux_base.back() == 0) {
    os << "  constant LANE_MUX_OFFSETS : natural_array(0 to -1) := (others => 0);\n\n";
  } else {
    os << "  constant LANE_MUX_OFFSETS : natural_array(0 to " << mux_base.back() - 1 << ") := (\n";
    std::size_t row = 0;
    for (const auto& p : d.lane_plans) {
      for (const auto& m : p.mux_inputs) {
        os << "    " << row << " => " << m.phv_bit_offset << (row + 1 < mux_base.back() ? "," : "")
           << "  -- mux lane " << p.lane << ": " << ids[m.node.header] << "[" << m.node.byte << "]\n";
        ++row;
      }
    }
    os << "  );\n\n";
  }

  // Transition tables: one row per guard cube; a transition is taken when
  // (phv_valid and mask) = value.
  os << "  -- Lane l transitions LANE_TRANSITIONS(LANE_TRANS_BASE(l) .. LANE_TRANS_BASE(l + 1) - 1);\n"
        "  -- state 0 is idle.\n";
  base_array("LANE_TRANS_BASE", trans_base);
  if (trans_base.back() == 0) {
    os << "  constant LANE_TRANSITIONS : transition_array(0 to -1) := (others => (0, 0, (others => '0'), "
          "(others => '0')));\n\n";
  } else {
    os << "  constant LANE_TRANSITIONS : transition_array(0 to " << trans_base.back() - 1 << ") := (\n";
    std::size_t row = 0;
    for (const auto& p : d.lane_plans) {
      for (const auto& t : p.transitions) {
        for (const auto& c : t.guard) {
          os << "    " << row << " => (from_state => " << t.from << ", to_state => " << t.to
             << ", mask => " << vhdl_bits(c.mask) << ", value => " << vhdl_bits(c.value) << ")"
             << (row + 1 < trans_base.back() ? "," : "") << "  -- fsm lane " << p.lane << "\n";
          ++row;
        }
      }
    }
    os << "  );\n\n";
  }

  // Payload control memory.
  const auto& entries = d.payload_memory.entries();
  os << "  -- Associative payload control memory, keyed by PHV_valid.\n";
  if (entries.empty()) {
    os << "  constant PAYLOAD_CTRL_MEM : payload_ctrl_array(0 to -1) := (others => ((others => '0'), 0, "
          "(others => '0')));\n";
  } else {
    os << "  constant PAYLOAD_CTRL_MEM : payload_ctrl_array(0 to " << entries.size() - 1 << ") := (\n";
    std::size_t row = 0;
    for (const auto& [bitmap, e] : entries) {
      os << "    " << row << " => (valid => " << vhdl_bits(bitmap) << ", rotate => " << e.rotate_bytes
         << ", delay_mask => " << vhdl_bits(e.delay_mask) << ")" << (row + 1 < entries.size() ? "," : "")
         << "  -- ctrl ph_w=" << e.header_bits_total << "\n";
      ++row;
    }
    os << "  );\n";
  }
  os << "end package;\n";
  return os.str();
}

inline std::string emit_lane_shifter(const std::string& top) {
  std::ostringstream os;
  os << kBanner << header_libs(top);
  os << "-- Header shifter for one output byte lane: a state machine stepping\n"
        "-- through the lane's sub-DAG and a multiplexer over its PHV bytes.\n";
  os << "entity " << top << R"(_lane_shifter is
  generic (LANE : natural);
  port (
    clk       : in  std_logic;
    rst_n     : in  std_logic;
    start     : in  std_logic;
    advance   : in  std_logic;
    phv_data  : in  std_logic_vector(PHV_DATA_WIDTH - 1 downto 0);
    phv_valid : in  valid_t;
    hdr_data  : out byte_t;
    hdr_valid : out std_logic;
    hdr_last  : out std_logic
  );
end entity;

architecture rtl of )" << top << R"(_lane_shifter is
  constant MUX_FIRST   : natural := LANE_MUX_BASE(LANE);
  constant MUX_INPUTS  : natural := LANE_MUX_BASE(LANE + 1) - LANE_MUX_BASE(LANE);
  constant TRANS_FIRST : natural := LANE_TRANS_BASE(LANE);
  constant TRANS_END   : natural := LANE_TRANS_BASE(LANE + 1);

  function next_state(s : natural; v : valid_t) return natural is
  begin
    for i in TRANS_FIRST to TRANS_END - 1 loop
      if LANE_TRANSITIONS(i).from_state = s and
         (v and LANE_TRANSITIONS(i).mask) = LANE_TRANSITIONS(i).value then
        return LANE_TRANSITIONS(i).to_state;
      end if;
    end loop;
    return 0;
  end function;

  signal state : natural range 0 to MUX_INPUTS := 0;
begin
  fsm : process (clk)
  begin
    if rising_edge(clk) then
      if rst_n = '0' then
        state <= 0;
      elsif start = '1' then
        state <= next_state(0, phv_valid);
      elsif advance = '1' and state /= 0 then
        state <= next_state(state, phv_valid);
      end if;
    end if;
  end process;

  mux : process (all)
  begin
    hdr_data <= (others => '0');
    for k in 0 to MUX_INPUTS - 1 loop
      if state = k + 1 then
        hdr_data <= phv_data(LANE_MUX_OFFSETS(MUX_FIRST + k) + 7 downto LANE_MUX_OFFSETS(MUX_FIRST + k));
      end if;
    end loop;
  end process;

  hdr_valid <= '1' when state /= 0 else '0';
  hdr_last  <= '1' when state /= 0 and next_state(state, phv_valid) = 0 else '0';
end architecture;
)";
  return os.str();
}

inline std::string emit_payload_shifter(const std::string& top) {
  std::ostringstream os;
  os << kBanner << header_libs(top);
  os << "-- Payload shifter for one output byte: rotation mux, delay register,\n"
        "-- and current/delayed select for data and keep.\n";
  os << "entity " << top << R"(_payload_shifter is
  generic (BYTE : natural);
  port (
    clk      : in  std_logic;
    rst_n    : in  std_logic;
    clear    : in  std_logic;
    capture  : in  std_logic;
    rotate   : in  natural range 0 to BUS_BYTES - 1;
    delay    : in  std_logic;
    in_data  : in  std_logic_vector(BUS_WIDTH - 1 downto 0);
    in_keep  : in  std_logic_vector(BUS_BYTES - 1 downto 0);
    out_data : out byte_t;
    out_keep : out std_logic
  );
end entity;

architecture rtl of )" << top << R"(_payload_shifter is
  signal rot_data : byte_t;
  signal rot_keep : std_logic;
  signal reg_data : byte_t := (others => '0');
  signal reg_keep : std_logic := '0';
begin
  rotation : process (all)
    variable src : natural;
  begin
    rot_data <= (others => '0');
    rot_keep <= '0';
    for k in 0 to BUS_BYTES - 1 loop
      if rotate = k then
        src := (BYTE + BUS_BYTES - k) mod BUS_BYTES;
        rot_data <= in_data(8 * src + 7 downto 8 * src);
        rot_keep <= in_keep(src);
      end if;
    end loop;
  end process;

  delayed : process (clk)
  begin
    if rising_edge(clk) then
      if rst_n = '0' or clear = '1' then
        reg_data <= (others => '0');
        reg_keep <= '0';
      elsif capture = '1' then
        reg_data <= rot_data;
        reg_keep <= rot_keep;
      end if;
    end if;
  end process;

  out_data <= reg_data when delay = '1' else rot_data;
  out_keep <= reg_keep when delay = '1' else rot_keep;
end architecture;
)";
  return os.str();
}

inline std::string emit_selector(const std::string& top) {
  std::ostringstream os;
  os << kBanner << header_libs(top);
  os << "-- Per-byte data select between the PHV and payload shifters.\n";
  os << "entity " << top << R"(_selector is
  port (
    hdr_data    : in  std_logic_vector(BUS_WIDTH - 1 downto 0);
    hdr_valid   : in  std_logic_vector(BUS_BYTES - 1 downto 0);
    phv_last    : in  std_logic;
    pay_data    : in  std_logic_vector(BUS_WIDTH - 1 downto 0);
    pay_keep    : in  std_logic_vector(BUS_BYTES - 1 downto 0);
    pay_last    : in  std_logic;
    has_payload : in  std_logic;
    pkt_data    : out std_logic_vector(BUS_WIDTH - 1 downto 0);
    pkt_keep    : out std_logic_vector(BUS_BYTES - 1 downto 0);
    pkt_last    : out std_logic
  );
end entity;

architecture rtl of )" << top << R"(_selector is
begin
  data_select : for b in 0 to BUS_BYTES - 1 generate
    pkt_data(8 * b + 7 downto 8 * b) <= hdr_data(8 * b + 7 downto 8 * b) when hdr_valid(b) = '1' else
                                        pay_data(8 * b + 7 downto 8 * b) when pay_keep(b) = '1' else
                                        (others => '0');
    pkt_keep(b) <= hdr_valid(b) or pay_keep(b);
  end generate;

  pkt_last <= pay_last when has_payload = '1' else phv_last;
end architecture;
)";
  return os.str();
}

inline std::string emit_top(const std::string& top) {
  std::ostringstream os;
  os << kBanner << header_libs(top);
  os << "entity " << top << R"(_deparser is
  port (
    clk              : in  std_logic;
    rst_n            : in  std_logic;
    -- Pkt_out stream
    pkt_out_tdata    : out std_logic_vector(BUS_WIDTH - 1 downto 0);
    pkt_out_tkeep    : out std_logic_vector(BUS_BYTES - 1 downto 0);
    pkt_out_tlast    : out std_logic;
    pkt_out_tvalid   : out std_logic;
    pkt_out_tready   : in  std_logic;
    -- Payload stream
    payload_tdata    : in  std_logic_vector(BUS_WIDTH - 1 downto 0);
    payload_tkeep    : in  std_logic_vector(BUS_BYTES - 1 downto 0);
    payload_tlast    : in  std_logic;
    payload_tvalid   : in  std_logic;
    payload_tready   : out std_logic;
    -- PHV
    phv_data         : in  std_logic_vector(PHV_DATA_WIDTH - 1 downto 0);
    phv_valid        : in  valid_t;
    phv_valid_strobe : in  std_logic
  );
end entity;

architecture rtl of )" << top << R"(_deparser is
  function any_set(v : std_logic_vector) return std_logic is
  begin
    for i in v'range loop
      if v(i) = '1' then
        return '1';
      end if;
    end loop;
    return '0';
  end function;

  function count_set(v : std_logic_vector) return natural is
    variable n : natural := 0;
  begin
    for i in v'range loop
      if v(i) = '1' then
        n := n + 1;
      end if;
    end loop;
    return n;
  end function;

  signal busy        : std_logic := '0';
  signal start       : std_logic;
  signal has_payload : std_logic := '0';

  signal mem_hit     : std_logic;
  signal mem_rotate  : natural range 0 to BUS_BYTES - 1;
  signal mem_delay   : std_logic_vector(BUS_BYTES - 1 downto 0);
  signal ctrl_rotate : natural range 0 to BUS_BYTES - 1 := 0;
  signal ctrl_delay  : std_logic_vector(BUS_BYTES - 1 downto 0) := (others => '0');

  signal hdr_data    : std_logic_vector(BUS_WIDTH - 1 downto 0);
  signal hdr_valid   : std_logic_vector(BUS_BYTES - 1 downto 0);
  signal hdr_last    : std_logic_vector(BUS_BYTES - 1 downto 0);
  signal hdr_any     : std_logic;
  signal phv_last    : std_logic;

  signal partial     : std_logic;
  signal fits        : std_logic;
  signal pay_on      : std_logic;
  signal in_avail    : std_logic;
  signal in_keep     : std_logic_vector(BUS_BYTES - 1 downto 0);
  signal in_done     : std_logic := '0';
  signal spill       : std_logic := '0';
  signal pay_data    : std_logic_vector(BUS_WIDTH - 1 downto 0);
  signal pay_keep    : std_logic_vector(BUS_BYTES - 1 downto 0);
  signal pay_last    : std_logic;

  signal empty_pkt   : std_logic;
  signal sel_last    : std_logic;
  signal out_valid   : std_logic;
  signal out_last    : std_logic;
  signal fire        : std_logic;
  signal capture     : std_logic;
begin
  ctrl_memory : process (all)
  begin
    mem_hit    <= '0';
    mem_rotate <= 0;
    mem_delay  <= (others => '0');
    for i in PAYLOAD_CTRL_MEM'range loop
      if phv_valid = PAYLOAD_CTRL_MEM(i).valid then
        mem_hit    <= '1';
        mem_rotate <= PAYLOAD_CTRL_MEM(i).rotate;
        mem_delay  <= PAYLOAD_CTRL_MEM(i).delay_mask;
      end if;
    end loop;
  end process;

  start <= phv_valid_strobe and not busy;

  control : process (clk)
  begin
    if rising_edge(clk) then
      if rst_n = '0' then
        busy    <= '0';
        in_done <= '0';
        spill   <= '0';
      elsif start = '1' then
        assert mem_hit = '1' report "invalid header combination on phv_valid" severity error;
        busy        <= '1';
        has_payload <= payload_tvalid;
        ctrl_rotate <= mem_rotate;
        ctrl_delay  <= mem_delay;
        in_done     <= '0';
        spill       <= '0';
      elsif fire = '1' then
        if out_last = '1' then
          busy <= '0';
        end if;
        if capture = '1' and payload_tlast = '1' then
          in_done <= '1';
          if count_set(payload_tkeep) > BUS_BYTES - ctrl_rotate then
            spill <= '1';
          end if;
        elsif spill = '1' then
          spill <= '0';
        end if;
      end if;
    end if;
  end process;

  hdr_any  <= any_set(hdr_valid);
  phv_last <= hdr_any and not any_set(hdr_valid and not hdr_last);

  -- Payload bytes join the last header beat when it is partial.
  partial  <= '1' when ctrl_rotate /= 0 else '0';
  fits     <= '1' when count_set(payload_tkeep) <= BUS_BYTES - ctrl_rotate else '0';
  pay_on   <= busy and has_payload and ((not hdr_any) or (phv_last and partial));
  in_avail <= pay_on and payload_tvalid and not in_done;
  in_keep  <= payload_tkeep when in_avail = '1' else (others => '0');
  pay_last <= spill or (in_avail and payload_tlast and fits);

  empty_pkt <= busy and not hdr_any and not has_payload;
  out_last  <= sel_last or empty_pkt;
  out_valid <= busy and (hdr_any or pay_on or empty_pkt) and
               ((not pay_on) or in_avail or spill);
  fire      <= out_valid and pkt_out_tready;
  capture   <= fire and in_avail;

  payload_tready <= capture;
  pkt_out_tvalid <= out_valid;
  pkt_out_tlast  <= out_last;

  lanes : for l in 0 to BUS_BYTES - 1 generate
    phv_shifter : entity work.)" << top << R"(_lane_shifter
      generic map (LANE => l)
      port map (
        clk       => clk,
        rst_n     => rst_n,
        start     => start,
        advance   => fire,
        phv_data  => phv_data,
        phv_valid => phv_valid,
        hdr_data  => hdr_data(8 * l + 7 downto 8 * l),
        hdr_valid => hdr_valid(l),
        hdr_last  => hdr_last(l)
      );

    payload_shifter : entity work.)" << top << R"(_payload_shifter
      generic map (BYTE => l)
      port map (
        clk      => clk,
        rst_n    => rst_n,
        clear    => start,
        capture  => capture,
        rotate   => ctrl_rotate,
        delay    => ctrl_delay(l),
        in_data  => payload_tdata,
        in_keep  => in_keep,
        out_data => pay_data(8 * l + 7 downto 8 * l),
        out_keep => pay_keep(l)
      );
  end generate;

  selector : entity work.)" << top << R"(_selector
    port map (
      hdr_data    => hdr_data,
      hdr_valid   => hdr_valid,
      phv_last    => phv_last,
      pay_data    => pay_data,
      pay_keep    => pay_keep,
      pay_last    => pay_last,
      has_payload => has_payload,
      pkt_data    => pkt_out_tdata,
      pkt_keep    => pkt_out_tkeep,
      pkt_last    => sel_last
    );
end architecture;
)";
  return os.str();
}

}  // namespace detail

// Emits the design as five VHDL files. Byte-identical for identical designs.
inline HdlOutput emit_hdl(const StructuralDesign& design) {
  const std::string top = sanitize_identifier(design.top_name);
  if (top != design.top_name) {
    throw Error("rtl", "top name '" + design.top_name + "' is not a valid identifier (try '" + top + "')");
  }
  std::vector<std::string> names;
  for (const auto& h : design.layout.instances) names.push_back(h.name);
  IdentifierMap ids = map_identifiers(names);
  for (const auto& id : ids.identifiers) {
    if (id.starts_with(top + "_")) {
      throw Error("rtl", "identifier '" + id + "' collides with the generated unit names");
    }
  }

  HdlOutput out;
  out.notes = std::move(ids.notes);
  out.files.push_back({top + "_deparser.vhd", detail::emit_top(top)});
  out.files.push_back({top + "_lane_shifter.vhd", detail::emit_lane_shifter(top)});
  out.files.push_back({top + "_payload_shifter.vhd", detail::emit_payload_shifter(top)});
  out.files.push_back({top + "_selector.vhd", detail::emit_selector(top)});
  out.files.push_back({top + "_pkg.vhd", detail::emit_package(design, ids.identifiers)});
  return out;
}

}  // namespace dpgen::rtl
