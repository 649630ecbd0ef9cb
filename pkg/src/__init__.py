# src package: slant submersion verification engine
