//! Expected results on the storage-catalog fixture.

/// The basic diff, by canonical form.
pub const BASIC: [&str; 25] = [
    "addC(0.85)",
    "addC(1.3)",
    "addC(Blu-ray)",
    "addC(HD-DVD)",
    "addC(MLC)",
    "addC(Notebook)",
    "addC(SLC)",
    "addC(\"Solid State Disks\")",
    "addR((0.85,subCatOf,MLC))",
    "addR((1.3,subCatOf,SLC))",
    "addR((1.8,subCatOf,Notebook))",
    "addR((2½,subCatOf,Notebook))",
    "addR((Blu-ray,subCatOf,\"Optical Disc Drives\"))",
    "addR((HD-DVD,subCatOf,\"Optical Disc Drives\"))",
    "addR((MLC,subCatOf,\"Solid State Disks\"))",
    "addR((Notebook,subCatOf,\"Hard Disc Drives\"))",
    "addR((SLC,subCatOf,\"Solid State Disks\"))",
    "addR((\"Solid State Disks\",subCatOf,\"Drives & Storage\"))",
    "delR((1.8,subCatOf,\"Hard Disc Drives\"))",
    "delR((2½,subCatOf,\"Hard Disc Drives\"))",
    "delR((CD-RW,subCatOf,\"Optical Disc Drives\"))",
    "delR((DVD-ROM,subCatOf,\"Optical Disc Drives\"))",
    "mapC(CD-RW,Other)",
    "mapC(DVD-ROM,Other)",
    "mapC(Other,Other)",
];

/// The compact diff in either aggregation mode.
pub const COMPACT: [&str; 11] = [
    "addC(Notebook)",
    "addLeaf(Blu-ray,{\"Optical Disc Drives\"})",
    "addLeaf(HD-DVD,{\"Optical Disc Drives\"})",
    "addR((Notebook,subCatOf,\"Hard Disc Drives\"))",
    "addR((\"Solid State Disks\",subCatOf,\"Drives & Storage\"))",
    "addSubGraph(\"Solid State Disks\",{0.85,1.3,MLC,SLC})",
    "delR((CD-RW,subCatOf,\"Optical Disc Drives\"))",
    "delR((DVD-ROM,subCatOf,\"Optical Disc Drives\"))",
    "merge({CD-RW,DVD-ROM,Other},Other)",
    "move(1.8,\"Hard Disc Drives\",Notebook)",
    "move(2½,\"Hard Disc Drives\",Notebook)",
];

/// (created by, op, eliminated by) for every op the literal run creates.
pub const LEDGER: [(&str, &str, &str); 41] = [
    ("b1", "addC(HD-DVD)", "c5"),
    ("b1", "addC(Blu-ray)", "c5"),
    ("b1", "addC(Notebook)", ""),
    ("b1", "addC(\"Solid State Disks\")", "a5"),
    ("b1", "addC(SLC)", "c9"),
    ("b1", "addC(MLC)", "c9"),
    ("b1", "addC(1.3)", "c5"),
    ("b1", "addC(0.85)", "c5"),
    ("b3", "mapC(DVD-ROM,Other)", "c7"),
    ("b3", "mapC(CD-RW,Other)", "c7"),
    ("b5", "mapC(Other,Other)", "c7"),
    ("b6", "addR((HD-DVD,subCatOf,\"Optical Disc Drives\"))", "c5"),
    ("b6", "addR((Blu-ray,subCatOf,\"Optical Disc Drives\"))", "c5"),
    ("b6", "addR((Notebook,subCatOf,\"Hard Disc Drives\"))", ""),
    ("b6", "addR((1.8,subCatOf,Notebook))", "c2"),
    ("b6", "addR((2½,subCatOf,Notebook))", "c2"),
    ("b6", "addR((\"Solid State Disks\",subCatOf,\"Drives & Storage\"))", ""),
    ("b6", "addR((SLC,subCatOf,\"Solid State Disks\"))", "a5"),
    ("b6", "addR((MLC,subCatOf,\"Solid State Disks\"))", "a5"),
    ("b6", "addR((1.3,subCatOf,SLC))", "c5"),
    ("b6", "addR((0.85,subCatOf,MLC))", "c5"),
    ("b7", "delR((1.8,subCatOf,\"Hard Disc Drives\"))", "c2"),
    ("b7", "delR((2½,subCatOf,\"Hard Disc Drives\"))", "c2"),
    ("b7", "delR((DVD-ROM,subCatOf,\"Optical Disc Drives\"))", ""),
    ("b7", "delR((CD-RW,subCatOf,\"Optical Disc Drives\"))", ""),
    ("c2", "move(1.8,\"Hard Disc Drives\",Notebook)", ""),
    ("c2", "move(2½,\"Hard Disc Drives\",Notebook)", ""),
    ("c5", "addLeaf(HD-DVD,{\"Optical Disc Drives\"})", ""),
    ("c5", "addLeaf(Blu-ray,{\"Optical Disc Drives\"})", ""),
    ("c5", "addLeaf(1.3,{SLC})", "c9"),
    ("c5", "addLeaf(0.85,{MLC})", "c9"),
    ("c7", "merge({DVD-ROM},Other)", "a3"),
    ("c7", "merge({CD-RW},Other)", "a3"),
    ("c7", "merge({Other},Other)", "a3"),
    ("c9", "addSubGraph(SLC,{1.3})", "a5"),
    ("c9", "addSubGraph(MLC,{0.85})", "a5"),
    ("a3", "merge({CD-RW,DVD-ROM},Other)", "a3"),
    ("a3", "merge({CD-RW,DVD-ROM,Other},Other)", ""),
    ("a5", "addSubGraph(\"Solid State Disks\",{1.3,SLC})", "a6"),
    ("a5", "addSubGraph(\"Solid State Disks\",{0.85,MLC})", "a6"),
    ("a6", "addSubGraph(\"Solid State Disks\",{0.85,1.3,MLC,SLC})", ""),
];
