function e(e){var t=[];if(!e||typeof e!=="object"){return["user must be an object"]}if(typeof e.name!=="string"||e.name.length<2){t.push("name too short")}if(!/^[^@\s]+@[^@\s]+\.[a-z]{2,}$/i.test(e.email||"")){t.push("email invalid")}if(e.age!==undefined&&(e.age<0||e.age>100+50)){t.push("age out of range")}return t}
