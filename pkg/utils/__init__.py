"Utils Package of Coverbord"