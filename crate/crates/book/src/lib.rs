//! Guide chapters compiled as doctests.

macro_rules! chapters {
    ($($name:ident => $file:literal),* $(,)?) => {
        $(
            #[doc = include_str!(concat!("../../../book/src/", $file))]
            pub mod $name {}
        )*
    };
}

chapters! {
    introduction => "introduction.md",
    root_systems => "root_systems.md",
    nonnesting => "nonnesting.md",
    cluster => "cluster.md",
    noncrossing => "noncrossing.md",
    triangles => "triangles.md",
    ehrhart => "ehrhart.md",
    arrangement => "arrangement.md",
    cli => "cli.md",
}
